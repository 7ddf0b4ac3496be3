//! Self-checking identities between the closed forms.

use crate::specfun::{digamma, gauss_2f1, hyp_pfq, sin_pi, SpecfunConfig};
use crate::{Error, Result};
use core::f64::consts::PI;
use num_traits::Float;

const GUARD_BAND: f64 = 1e-5;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be positive"));
    }
    let n = (1.0 / alpha).round();
    if n >= 1.0 && (alpha - 1.0 / n).abs() < GUARD_BAND {
        return Err(Error::NearSingularAlpha(alpha));
    }
    Ok(())
}

/// Left minus right side of the identity linking the β and 1/β series:
///
/// ```text
/// αβ/(α−1)·₂F₁(1, (α−1)/α; (2α−1)/α; −β) + α − πβ^{1/α}/sin(π/α)
///   = α/(β(α+1))·₂F₁(1, (α+1)/α; (2α+1)/α; −1/β)
/// ```
///
/// Both sides go through [`gauss_2f1`] only.
pub fn continuation_residual(alpha: f64, beta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter("beta must be positive"));
    }
    let cfg = SpecfunConfig::default();
    let p = 1.0 / alpha;
    let lhs_f = gauss_2f1(1.0, 1.0 - p, 2.0 - p, -beta, &cfg)?;
    let rhs_f = gauss_2f1(1.0, 1.0 + p, 2.0 + p, -1.0 / beta, &cfg)?;
    let lhs = alpha * beta / (alpha - 1.0) * lhs_f + alpha - PI * (p * beta.ln()).exp() / sin_pi(p);
    let rhs = alpha / (beta * (alpha + 1.0)) * rhs_f;
    Ok(lhs - rhs)
}

/// S − π/sin(π/α) with S from its ₃F₂ definition at −1:
///
/// ```text
/// S = α + ₃F₂(1, 1, (α−1)/α; 2, (2α−1)/α; −1)/(α−1)
///       + ₃F₂(1, 1, (α+1)/α; 2, (2α+1)/α; −1)/(α+1)
/// ```
pub fn appendix_b_identity_residual(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let cfg = SpecfunConfig { abs_tol: 1e-12, ..SpecfunConfig::default() };
    let p = 1.0 / alpha;
    let f_minus = hyp_pfq(&[1.0, 1.0, 1.0 - p], &[2.0, 2.0 - p], -1.0, &cfg)?.value;
    let f_plus = hyp_pfq(&[1.0, 1.0, 1.0 + p], &[2.0, 2.0 + p], -1.0, &cfg)?.value;
    let s = alpha + f_minus / (alpha - 1.0) + f_plus / (alpha + 1.0);
    Ok(s - PI / sin_pi(p))
}

/// The same target reached through digamma:
/// ½[ψ(1−q) − ψ(q) + ψ(½+q) − ψ(½−q)] − π/sin(π/α), q = 1/(2α).
pub fn appendix_b_identity_digamma(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let q = 0.5 / alpha;
    let s = 0.5 * (digamma(1.0 - q)? - digamma(q)? + digamma(0.5 + q)? - digamma(0.5 - q)?);
    Ok(s - PI / sin_pi(1.0 / alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuation_examples() {
        for (a, b) in [(1.7, 0.4), (0.37, 2.5), (3.2, 1.0)] {
            assert!(continuation_residual(a, b).unwrap().abs() <= 1e-10, "a={a} b={b}");
        }
        assert!(matches!(continuation_residual(0.5 + 1e-7, 0.3), Err(Error::NearSingularAlpha(_))));
        assert!(matches!(continuation_residual(1.0, 0.3), Err(Error::NearSingularAlpha(_))));
    }

    #[test]
    fn appendix_b_examples() {
        for a in [2.0, 0.6, 5.5] {
            assert!(appendix_b_identity_residual(a).unwrap().abs() <= 1e-10, "a={a}");
            assert!(appendix_b_identity_digamma(a).unwrap().abs() <= 1e-10, "a={a}");
        }
        assert!(matches!(appendix_b_identity_residual(1.0 / 3.0), Err(Error::NearSingularAlpha(_))));
    }
}
