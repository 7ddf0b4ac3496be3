//! Incomplete beta function B_z(b, q) = ∫₀^z t^{b−1}(1−t)^{q−1} dt.
//!
//! Evaluated with the Lentz continued fraction, independently of the
//! hypergeometric code. The relation ₂F₁(a,b;b+1;z) = b z^{−b} B_z(b, 1−a)
//! ties the two together and is exercised in the tests.

use crate::{Error, Result};
use num_traits::Float;

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MAX_ITER: usize = 10_000;

/// Continued fraction for B_x(p,q)·p / (x^p (1−x)^q).
fn beta_cf(x: f64, p: f64, q: f64) -> Result<f64> {
    let qab = p + q;
    let qap = p + 1.0;
    let qam = p - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence { terms: CF_MAX_ITER as u64, bound: f64::NAN })
}

fn ln_beta(p: f64, q: f64) -> f64 {
    libm::lgamma(p) + libm::lgamma(q) - libm::lgamma(p + q)
}

/// B_x(p,q) for x in [0,1), p > 0 and any real q.
fn incomplete_beta_unit(x: f64, p: f64, q: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let front = |x: f64, p: f64, q: f64| (p * x.ln() + q * (1.0 - x).ln()).exp() / p;
    // The fraction converges fastest for x < (p+1)/(p+q+2); above that, use
    // the complement when the complete beta exists.
    if q > 0.0 && x > (p + 1.0) / (p + q + 2.0) {
        let full = ln_beta(p, q).exp();
        return Ok(full - front(1.0 - x, q, p) * beta_cf(1.0 - x, q, p)?);
    }
    Ok(front(x, p, q) * beta_cf(x, p, q)?)
}

/// B_z(b, 1−a) for real z.
///
/// For 0 ≤ z < 1 this is the usual incomplete beta. For z < 0 the integrand
/// t^{b−1} is real only when b is an integer; other b give `DomainError`
/// (use [`incomplete_beta_scaled`] there).
pub fn incomplete_beta(z: f64, b: f64, one_minus_a: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain("incomplete_beta requires b > 0"));
    }
    if !(z < 1.0) || z.is_nan() {
        return Err(Error::Domain("incomplete_beta requires z < 1"));
    }
    if z >= 0.0 {
        return incomplete_beta_unit(z, b, one_minus_a);
    }
    if b != b.round() {
        return Err(Error::Domain("B_z with z < 0 is complex for non-integer b"));
    }
    // t = −τ, then s = τ/(1+τ): ∫₀^{|z|} τ^{b−1}(1+τ)^{−a} dτ = B_{s*}(b, a−b).
    let a = 1.0 - one_minus_a;
    let w = -z;
    let s = w / (1.0 + w);
    let magnitude = incomplete_beta_unit(s, b, a - b)?;
    let sign = if (b as i64 - 1) % 2 == 0 { -1.0 } else { 1.0 };
    Ok(sign * magnitude)
}

/// z^{−b} B_z(b, 1−a) = ∫₀¹ s^{b−1}(1−zs)^{−a} ds, real for every z < 1.
pub fn incomplete_beta_scaled(z: f64, b: f64, one_minus_a: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain("incomplete_beta requires b > 0"));
    }
    if !(z < 1.0) || z.is_nan() {
        return Err(Error::Domain("incomplete_beta requires z < 1"));
    }
    if z == 0.0 {
        return Ok(1.0 / b);
    }
    if z > 0.0 {
        return Ok(incomplete_beta_unit(z, b, one_minus_a)? * z.powf(-b));
    }
    let a = 1.0 - one_minus_a;
    let w = -z;
    let s = w / (1.0 + w);
    Ok(incomplete_beta_unit(s, b, a - b)? * w.powf(-b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(incomplete_beta(0.0, 2.0, 0.4).unwrap(), 0.0);
        assert!((incomplete_beta(0.5, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        // ∫₀^½ dt/√(t(1−t)) = π/2.
        let v = incomplete_beta(0.5, 0.5, 0.5).unwrap();
        assert!((v - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn negative_argument_with_integer_b() {
        // ∫₀^{−1} t²/(1−t) dt = −∫₀¹ τ²/(1+τ) dτ = −(ln 2 − ½).
        let v = incomplete_beta(-1.0, 3.0, 0.0).unwrap();
        assert!((v + (core::f64::consts::LN_2 - 0.5)).abs() < 1e-13);
        assert!(incomplete_beta(-0.5, 1.5, 0.3).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(incomplete_beta(1.0, 1.0, 1.0).is_err());
        assert!(incomplete_beta(0.3, 0.0, 1.0).is_err());
        assert!(incomplete_beta_scaled(2.0, 1.0, 1.0).is_err());
    }
}
