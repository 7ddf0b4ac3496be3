//! Number formatting and the JSON envelope shared by all commands.

use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

/// 17 significant digits in scientific notation; round-trips any f64 and
/// does not depend on locale.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn record(command: &str, inputs: Value, results: Value, diagnostics: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics,
    })
}
