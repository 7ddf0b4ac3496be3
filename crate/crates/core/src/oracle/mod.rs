//! Independent cross-checks for the closed forms: adaptive quadrature of the
//! defining integrals, a Monte-Carlo estimator and finite differences.

mod fd;
mod montecarlo;
mod quadrature;

pub use fd::{fd_derivative, FdOrder};
pub use montecarlo::{mi_monte_carlo, MonteCarloConfig, MonteCarloEstimate};
pub use quadrature::{integrate, QuadResult, QuadratureConfig};

use crate::channel::{ChannelParams, TwoPointInput};
use crate::Result;
use num_traits::Float;

/// ln(eᵃ + eᵇ), tolerating −∞ in either argument.
pub(crate) fn log_sum_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Log weights ln(a₁/σ²), ln(a₂/(x₂²+σ²)) of the output mixture.
fn mixture_logs(input: &TwoPointInput, ch: &ChannelParams) -> (f64, f64, f64, f64) {
    let s = ch.sigma2;
    let c = input.x2 * input.x2 + s;
    (ln_or_neg_inf(input.a1()) - s.ln(), ln_or_neg_inf(input.a2) - c.ln(), s, c)
}

/// J(x) by quadrature of ∫₀¹ log((a₁/σ²)u^{v/σ²} + (a₂/c)u^{v/c}) du,
/// v = x²+σ², c = x₂²+σ².
pub fn j_quadrature(x: f64, input: &TwoPointInput, ch: &ChannelParams, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let (l1, l2, s, c) = mixture_logs(input, ch);
    let v = x * x + s;
    let (e1, e2) = (v / s, v / c);
    let f = |u: f64| {
        let lu = u.ln();
        log_sum_exp(l1 + e1 * lu, l2 + e2 * lu)
    };
    Ok(integrate(f, 0.0, 1.0, cfg)?.value)
}

/// J(x) by quadrature directly over y ∈ [0, Y_max], Y_max² = 200·(x₂²+σ²).
pub fn j_quadrature_direct(
    x: f64,
    input: &TwoPointInput,
    ch: &ChannelParams,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let (l1, l2, s, c) = mixture_logs(input, ch);
    let v = x * x + s;
    let y_max = (200.0 * c).sqrt();
    let f = |y: f64| {
        let y2 = y * y;
        2.0 * y / v * (-y2 / v).exp() * log_sum_exp(l1 - y2 / s, l2 - y2 / c)
    };
    // Split at the bulk of the density so the subdivider starts well placed.
    let knee = (4.0 * v).sqrt().min(y_max);
    let head = integrate(f, 0.0, knee, cfg)?.value;
    let tail = if knee < y_max { integrate(f, knee, y_max, cfg)?.value } else { 0.0 };
    Ok(head + tail)
}

/// I(X;Y) assembled from quadrature values of J(0) and J(x₂).
pub fn mi_quadrature(input: &TwoPointInput, ch: &ChannelParams, cfg: &QuadratureConfig) -> Result<f64> {
    if input.is_degenerate() {
        return Ok(0.0);
    }
    let j0 = j_quadrature(0.0, input, ch, cfg)?;
    let j2 = j_quadrature(input.x2, input, ch, cfg)?;
    Ok(crate::mi::assemble(input, ch, j0, j2))
}
