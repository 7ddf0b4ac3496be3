//! I(X;Y) with both J's in the 1/β form, and its derivative in a₂.
//!
//! Writing r = x₂²/σ², w = a₁(1+r)/a₂, p₀ = (1+r)/r and p₁ = 1/r,
//!
//! ```text
//! I = a₁ log(1+r) − log(1+a₁r) − a₁r/(1+r) + a₁T(p₀, w) + a₂T(p₁, w)
//! ```
//!
//! with T(p, w) = (1 − ₂F₁(1, p; 1+p; −w))/p. In capacity mode x₂² = P/a₂,
//! so r = SNR/a₂ moves with a₂ as well.

use super::cases::t_term;
use crate::channel::{ChannelParams, TwoPointInput};
use crate::specfun::hyp2f1_unit_derivative;
use crate::{Error, Result};
use num_traits::Float;

/// (a₂, r, dr/da₂) describing a point of the compact form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactParams {
    pub a2: f64,
    pub r: f64,
    pub dr: f64,
}

impl CompactParams {
    /// x₂ held fixed, or tied to a₂ through x₂² = P/a₂ when the channel
    /// carries a power budget.
    pub fn from_input(input: &TwoPointInput, ch: &ChannelParams) -> Self {
        match ch.power_budget {
            Some(p) => {
                let r = p / (input.a2 * ch.sigma2);
                Self { a2: input.a2, r, dr: -r / input.a2 }
            }
            None => Self { a2: input.a2, r: input.x2 * input.x2 / ch.sigma2, dr: 0.0 },
        }
    }

    /// Capacity parameterisation at linear SNR.
    pub fn capacity(a2: f64, snr: f64) -> Self {
        let r = snr / a2;
        Self { a2, r, dr: -r / a2 }
    }
}

fn check(cp: &CompactParams) -> Result<()> {
    if !(cp.a2 > 0.0 && cp.a2 < 1.0) || !(cp.r > 0.0) || !cp.r.is_finite() {
        return Err(Error::DegenerateInput);
    }
    Ok(())
}

/// I(X;Y) from the compact form.
pub fn mi_compact(cp: &CompactParams) -> Result<f64> {
    check(cp)?;
    let (a2, r) = (cp.a2, cp.r);
    let a1 = 1.0 - a2;
    let w = a1 * (1.0 + r) / a2;
    let t0 = t_term((1.0 + r) / r, w)?.value;
    let t1 = t_term(1.0 / r, w)?.value;
    Ok(a1 * r.ln_1p() - (a1 * r).ln_1p() - a1 * r / (1.0 + r) + a1 * t0 + a2 * t1)
}

/// dT for T(p, w) = (1 − F)/p, F = ₂F₁(1, p; 1+p; −w).
fn t_differential(p: f64, dp: f64, w: f64, dw: f64, t: f64) -> Result<f64> {
    let df = hyp2f1_unit_derivative(p, dp, -w, -dw)?;
    Ok(-(df + t * dp) / p)
}

/// ∂I/∂a₂ at a compact-form point.
pub fn mi_derivative_compact(cp: &CompactParams) -> Result<f64> {
    check(cp)?;
    let (a2, r, dr) = (cp.a2, cp.r, cp.dr);
    let a1 = 1.0 - a2;
    let w = a1 * (1.0 + r) / a2;
    let dw = (-(1.0 + r) + a1 * dr) / a2 - w / a2;
    let (p0, p1) = ((1.0 + r) / r, 1.0 / r);
    let dp = -dr / (r * r);
    let t0 = t_term(p0, w)?.value;
    let t1 = t_term(p1, w)?.value;
    let dt0 = t_differential(p0, dp, w, dw, t0)?;
    let dt1 = t_differential(p1, dp, w, dw, t1)?;

    let d_log1pr = -r.ln_1p() + a1 * dr / (1.0 + r);
    let d_log1pa1r = (-r + a1 * dr) / (1.0 + a1 * r);
    let d_frac = -r / (1.0 + r) + a1 * dr / ((1.0 + r) * (1.0 + r));
    Ok(d_log1pr - d_log1pa1r - d_frac - t0 + a1 * dt0 + t1 + a2 * dt1)
}

/// ∂I/∂a₂, with x₂² = P/a₂ when the channel has a power budget and x₂ fixed
/// otherwise.
pub fn mi_derivative_a2(input: &TwoPointInput, ch: &ChannelParams) -> Result<f64> {
    if input.a2 <= 0.0 || input.a2 >= 1.0 {
        return Err(Error::DegenerateInput);
    }
    mi_derivative_compact(&CompactParams::from_input(input, ch))
}
