//! The three closed forms of
//! J(x) = ∫₀^∞ f(y|x)·log((a₁/σ²)e^{−y²/σ²} + (a₂/c)e^{−y²/c}) dy, c = x₂²+σ².
//!
//! All three share the split
//! log(…) = −y²/c + log(a₂/c) + log(1 + β⁻¹e^{−αy²/v}), v = x²+σ²,
//! and differ in how the last integral, ∫₀¹ log(1 + w·u^α) du with w = 1/β, is
//! evaluated.

use crate::channel::{derive_params, Case, ChannelParams, DerivedParams, TwoPointInput};
use crate::specfun::{lerch_family, sin_pi};
use crate::{Error, Result};
use num_traits::Float;

/// Value of a closed form together with the series work it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JValue {
    pub value: f64,
    pub terms: u32,
}

/// T(p, w) = w·Φ₁(w, 1+p) = w∫₀¹ tᵖ/(1+wt) dt, so that
/// ∫₀¹ log(1 + w·u^{1/p}) du = log(1+w) − T(p, w).
pub(crate) fn t_term(p: f64, w: f64) -> Result<JValue> {
    let fam = lerch_family(w, 1.0 + p)?;
    Ok(JValue { value: w * fam.phi1, terms: fam.terms })
}

/// T(n, 1/β) by the finite sum Σ_{j<n} (−β)ʲ/(n−j) + (−β)ⁿ·log(1+1/β).
/// Stable for β ≤ 1 only.
fn t_term_finite(n: u32, beta: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for j in 0..n {
        sum += pow / (n - j) as f64;
        pow *= -beta;
    }
    sum + pow * (1.0 / beta).ln_1p()
}

fn split(x: f64, input: &TwoPointInput, ch: &ChannelParams) -> (f64, f64) {
    let c = input.x2 * input.x2 + ch.sigma2;
    let v = x * x + ch.sigma2;
    (-v / c, (input.a2 / c).ln())
}

/// Case I: α = 1/n.
pub fn j_case1(x: f64, input: &TwoPointInput, ch: &ChannelParams) -> Result<f64> {
    let d = derive_params(x, input, ch)?;
    Ok(j_case1_with(x, input, ch, &d)?.value)
}

pub(crate) fn j_case1_with(x: f64, input: &TwoPointInput, ch: &ChannelParams, d: &DerivedParams) -> Result<JValue> {
    let n = match (d.case, d.n) {
        (Case::CaseI, Some(n)) => n,
        _ => return Err(Error::CaseMismatch),
    };
    let (j11, j12) = split(x, input, ch);
    let w = 1.0 / d.beta;
    let t = if d.beta <= 1.0 {
        JValue { value: t_term_finite(n, d.beta), terms: n }
    } else {
        t_term(n as f64, w)?
    };
    Ok(JValue { value: j11 + j12 + w.ln_1p() - t.value, terms: t.terms })
}

/// Case II: the form built around y*, natural for β < 1 and valid for any
/// β > 0 away from α = 1/n.
pub fn j_case2(x: f64, input: &TwoPointInput, ch: &ChannelParams) -> Result<f64> {
    let d = derive_params(x, input, ch)?;
    Ok(j_case2_with(x, input, ch, &d)?.value)
}

pub(crate) fn j_case2_with(x: f64, input: &TwoPointInput, ch: &ChannelParams, d: &DerivedParams) -> Result<JValue> {
    if d.case == Case::CaseI {
        return Err(Error::CaseMismatch);
    }
    if d.near_singular {
        return Err(Error::NearSingularAlpha(d.alpha));
    }
    let s = ch.sigma2;
    let p = 1.0 / d.alpha;
    let beta = d.beta;
    let fam = lerch_family(beta, 1.0 - p)?;
    let pole = core::f64::consts::PI * (p * beta.ln()).exp() / sin_pi(p);
    let value = -1.0 - x * x / s + (input.a1() / s).ln() + beta.ln_1p() - beta * fam.phi1 + pole;
    Ok(JValue { value, terms: fam.terms })
}

/// π·β^{1/α}/|sin(π/α)|, the size of the pole term of Case II.
pub(crate) fn case2_pole_magnitude(d: &DerivedParams) -> f64 {
    let p = 1.0 / d.alpha;
    core::f64::consts::PI * (p * d.beta.ln()).exp() / sin_pi(p).abs()
}

/// Case III: the form in powers of 1/β, valid for every β > 0.
pub fn j_case3(x: f64, input: &TwoPointInput, ch: &ChannelParams) -> Result<f64> {
    let d = derive_params(x, input, ch)?;
    Ok(j_case3_with(x, input, ch, &d)?.value)
}

pub(crate) fn j_case3_with(x: f64, input: &TwoPointInput, ch: &ChannelParams, d: &DerivedParams) -> Result<JValue> {
    let (j11, j12) = split(x, input, ch);
    let w = 1.0 / d.beta;
    let t = t_term(1.0 / d.alpha, w)?;
    #[cfg(not(feature = "inject-fault"))]
    let value = j11 + j12 + w.ln_1p() - t.value;
    #[cfg(feature = "inject-fault")]
    let value = j11 + j12 + w.ln_1p() + t.value;
    Ok(JValue { value, terms: t.terms })
}
