//! Mutual information of the two-point input, entropies, identities and the
//! analytic derivative with respect to a₂.
//!
//! With J(x) from [`cases`],
//! I(X;Y) = −a₁ − a₁ log σ² − a₂ − a₂ log(x₂²+σ²) − a₁J(0) − a₂J(x₂).

mod cases;
mod derivative;
mod identities;

pub use cases::{j_case1, j_case2, j_case3, JValue};
pub use derivative::{mi_compact, mi_derivative_a2, mi_derivative_compact, CompactParams};
pub use identities::{appendix_b_identity_digamma, appendix_b_identity_residual, continuation_residual};

use crate::channel::{derive_params_with, Case, CaseConfig, ChannelParams, DerivedParams, TwoPointInput};
use crate::oracle::{j_quadrature, QuadratureConfig};
use crate::{Error, Result};
use num_traits::Float;

/// Case II pole terms larger than this are routed through Case III instead.
pub const POLE_MAGNITUDE_LIMIT: f64 = 1e4;

/// Negative H(X|Y) within this distance of zero is treated as rounding.
pub const ENTROPY_CLAMP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    CaseI,
    CaseII,
    CaseIII,
    OracleFallback,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::CaseI => "CaseI",
            Route::CaseII => "CaseII",
            Route::CaseIII => "CaseIII",
            Route::OracleFallback => "OracleFallback",
        }
    }
}

/// How one J(x) was evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JEvaluation {
    pub value: f64,
    pub route: Route,
    pub alpha: f64,
    pub beta: f64,
    pub series_terms: u32,
    /// α was within the guard band of a reciprocal integer.
    pub near_singular: bool,
    /// The Case II pole term was too large and Case III was used.
    pub pole_guard: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MIResult {
    pub nats: f64,
    pub j0: f64,
    pub j_x2: f64,
    pub case_j0: Route,
    pub case_jx2: Route,
    pub diagnostics: Option<[JEvaluation; 2]>,
}

impl MIResult {
    fn zero() -> Self {
        Self {
            nats: 0.0,
            j0: 0.0,
            j_x2: 0.0,
            case_j0: Route::CaseIII,
            case_jx2: Route::CaseIII,
            diagnostics: None,
        }
    }
}

/// I from the two J values.
pub fn assemble(input: &TwoPointInput, ch: &ChannelParams, j0: f64, j_x2: f64) -> f64 {
    let a1 = input.a1();
    let a2 = input.a2;
    let c = input.x2 * input.x2 + ch.sigma2;
    -a1 - a1 * ch.sigma2.ln() - a2 - a2 * c.ln() - a1 * j0 - a2 * j_x2
}

fn closed_form(x: f64, input: &TwoPointInput, ch: &ChannelParams, d: &DerivedParams) -> Result<(JValue, Route, bool)> {
    match d.case {
        Case::CaseI => Ok((cases::j_case1_with(x, input, ch, d)?, Route::CaseI, false)),
        Case::CaseII if !d.near_singular && cases::case2_pole_magnitude(d) <= POLE_MAGNITUDE_LIMIT => {
            Ok((cases::j_case2_with(x, input, ch, d)?, Route::CaseII, false))
        }
        Case::CaseII => Ok((cases::j_case3_with(x, input, ch, d)?, Route::CaseIII, !d.near_singular)),
        Case::CaseIII => Ok((cases::j_case3_with(x, input, ch, d)?, Route::CaseIII, false)),
    }
}

/// J(x) by the routed closed form, falling back to quadrature if the closed
/// form fails or produces a non-finite value.
pub fn j_routed(x: f64, input: &TwoPointInput, ch: &ChannelParams) -> Result<JEvaluation> {
    j_routed_with(x, input, ch, &CaseConfig::default())
}

pub fn j_routed_with(x: f64, input: &TwoPointInput, ch: &ChannelParams, cfg: &CaseConfig) -> Result<JEvaluation> {
    let d = derive_params_with(x, input, ch, cfg)?;
    let mut eval = JEvaluation {
        value: f64::NAN,
        route: Route::OracleFallback,
        alpha: d.alpha,
        beta: d.beta,
        series_terms: 0,
        near_singular: d.near_singular,
        pole_guard: false,
    };
    match closed_form(x, input, ch, &d) {
        Ok((j, route, guard)) if j.value.is_finite() => {
            eval.value = j.value;
            eval.route = route;
            eval.series_terms = j.terms;
            eval.pole_guard = guard;
        }
        _ => {
            eval.value = j_quadrature(x, input, ch, &QuadratureConfig::default())?;
        }
    }
    Ok(eval)
}

pub fn mutual_information(input: &TwoPointInput, ch: &ChannelParams) -> Result<MIResult> {
    mutual_information_with(input, ch, &CaseConfig::default())
}

/// [`mutual_information`] with explicit Case I snapping and guard band.
pub fn mutual_information_with(input: &TwoPointInput, ch: &ChannelParams, cfg: &CaseConfig) -> Result<MIResult> {
    if input.is_degenerate() {
        return Ok(MIResult::zero());
    }
    let e0 = j_routed_with(0.0, input, ch, cfg)?;
    let e2 = j_routed_with(input.x2, input, ch, cfg)?;
    let raw = assemble(input, ch, e0.value, e2.value);
    // Rounding can leave a tiny negative value at very low SNR.
    let nats = if raw < 0.0 && raw > -ENTROPY_CLAMP { 0.0 } else { raw };
    if !(nats >= 0.0) {
        return Err(Error::Consistency("mutual information is negative"));
    }
    Ok(MIResult {
        nats,
        j0: e0.value,
        j_x2: e2.value,
        case_j0: e0.route,
        case_jx2: e2.route,
        diagnostics: Some([e0, e2]),
    })
}

/// Binary entropy of the input law, in nats.
pub fn input_entropy(input: &TwoPointInput) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    h(input.a2) + h(input.a1())
}

/// H(X|Y) = H(X) − I(X;Y).
pub fn conditional_entropy(input: &TwoPointInput, ch: &ChannelParams) -> Result<f64> {
    let h = input_entropy(input) - mutual_information(input, ch)?.nats;
    if h >= 0.0 {
        Ok(h)
    } else if h >= -ENTROPY_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Consistency("conditional entropy is negative"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I_04_2_1: f64 = 0.216_665_323_508_380_18;
    const I_05_1_1: f64 = 0.053_781_946_088_294_561;
    const HB_03: f64 = 0.610_864_302_054_893_49;

    fn setup(a2: f64, x2: f64, s: f64) -> (TwoPointInput, ChannelParams) {
        (TwoPointInput::new(a2, x2).unwrap(), ChannelParams::new(s).unwrap())
    }

    #[test]
    fn degenerate_inputs() {
        for (a2, x2) in [(0.0, 1.0), (1.0, 1.0), (0.4, 0.0)] {
            let (i, c) = setup(a2, x2, 1.0);
            assert_eq!(mutual_information(&i, &c).unwrap().nats, 0.0);
            let h = conditional_entropy(&i, &c).unwrap();
            assert!((h - input_entropy(&i)).abs() < 1e-15);
        }
    }

    #[test]
    fn reference_values() {
        if cfg!(feature = "inject-fault") {
            return;
        }
        let (i, c) = setup(0.4, 2.0, 1.0);
        assert!((mutual_information(&i, &c).unwrap().nats - I_04_2_1).abs() < 1e-12);
        let (i, c) = setup(0.5, 1.0, 1.0);
        let r = mutual_information(&i, &c).unwrap();
        assert!((r.nats - I_05_1_1).abs() < 1e-12);
        assert_eq!(r.case_j0, Route::CaseI);
        assert_eq!(r.case_jx2, Route::CaseI);
    }

    #[test]
    fn entropies() {
        assert!((input_entropy(&TwoPointInput::new(0.5, 1.0).unwrap()) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(input_entropy(&TwoPointInput::new(0.0, 1.0).unwrap()), 0.0);
        assert!((input_entropy(&TwoPointInput::new(0.3, 1.0).unwrap()) - HB_03).abs() < 1e-15);
        let (i, c) = setup(0.4, 2.0, 1.0);
        let h = conditional_entropy(&i, &c).unwrap();
        assert!(h > 0.0 && h < input_entropy(&i));
    }

    #[test]
    fn large_x2_limit() {
        if cfg!(feature = "inject-fault") {
            return;
        }
        let (i, c) = setup(0.3, 1e3, 1.0);
        let r = mutual_information(&i, &c).unwrap();
        assert!((r.nats - HB_03).abs() < 2e-3);
        assert!(r.nats < HB_03);
    }
}
