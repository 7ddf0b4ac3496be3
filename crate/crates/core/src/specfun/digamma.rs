//! Digamma ψ(x) by upward recurrence and the asymptotic series.

use super::{cos_pi, sin_pi};
use crate::{Error, Result};
use num_traits::Float;

/// B₂ₖ/(2k) for k = 1..8, the coefficients of x^{−2k} in
/// ψ(x) ~ ln x − 1/(2x) − Σ B₂ₖ/(2k x^{2k}).
const ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

const SHIFT: f64 = 8.0;

/// ψ(x) = d/dx ln Γ(x).
///
/// Negative arguments go through the reflection ψ(1−x) = ψ(x) + π cot πx.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("digamma of NaN"));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x < 0.0 {
        let cot = cos_pi(x) / sin_pi(x);
        return Ok(digamma(1.0 - x)? - core::f64::consts::PI * cot);
    }

    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut tail = 0.0;
    for c in ASYMPTOTIC {
        tail += c * pow;
        pow *= inv2;
    }
    Ok(acc + y.ln() - 0.5 / y - tail)
}
