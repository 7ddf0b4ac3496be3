//! Real-argument special functions used by the closed forms.

mod digamma;
mod incbeta;
mod lerch;

pub use digamma::digamma;
pub use incbeta::{incomplete_beta, incomplete_beta_scaled};
pub use lerch::{
    hyp2f1_unit, hyp2f1_unit_derivative, hyp2f1_unit_shift2, hyp3f2_unit_shift2, lerch_family,
    lerch_phi1, LerchFamily,
};

use crate::{Error, Result};
use num_traits::Float;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecfunConfig {
    /// Series truncation target (absolute).
    pub abs_tol: f64,
    pub max_terms: u64,
    /// |z| above which ₂F₁ switches to the Pfaff transformation.
    pub transform_threshold: f64,
}

impl Default for SpecfunConfig {
    fn default() -> Self {
        SpecfunConfig { abs_tol: 1e-14, max_terms: 10_000_000, transform_threshold: 0.5 }
    }
}

impl SpecfunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol < 1.0) {
            return Err(Error::InvalidParameter("abs_tol must lie in (0, 1)"));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter("max_terms must be at least 1"));
        }
        if !(self.transform_threshold > 0.0 && self.transform_threshold < 1.0) {
            return Err(Error::InvalidParameter("transform_threshold must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Partial sum of a hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: u64,
    /// Estimated absolute remainder.
    pub truncation_bound: f64,
}

/// Rising factorial a(a+1)⋯(a+k−1).
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Generalised hypergeometric series ₚF_q(numer; denom; z).
///
/// Summation stops once the last term and a remainder estimate are both below
/// `cfg.abs_tol`. For ratios bounded away from one the remainder is the
/// geometric tail of the current ratio. For alternating series whose term
/// ratio tends to −1 (p = q+1 at z = −1) consecutive partial sums are averaged
/// and the paired term |tₙ + tₙ₊₁|/2 serves as both the term size and the bound.
pub fn hyp_pfq(numer: &[f64], denom: &[f64], z: f64, cfg: &SpecfunConfig) -> Result<SeriesResult> {
    let p = numer.len();
    let q = denom.len();
    if z.is_nan() {
        return Err(Error::Domain("z is NaN"));
    }
    if p > q + 1 && z != 0.0 && !numer.iter().any(|&a| is_nonpositive_integer(a)) {
        return Err(Error::Divergence(z.abs()));
    }
    if p == q + 1 && z.abs() > 1.0 && !numer.iter().any(|&a| is_nonpositive_integer(a)) {
        return Err(Error::Divergence(z.abs()));
    }
    if z == 0.0 {
        return Ok(SeriesResult { value: 1.0, terms_used: 1, truncation_bound: 0.0 });
    }

    // Beyond this index every parameter shift a+k has a fixed sign, so term
    // magnitudes evolve monotonically and the stopping tests are meaningful.
    let settle = numer
        .iter()
        .chain(denom)
        .fold(0.0_f64, |m, &a| m.max(-a))
        .ceil() as u64
        + 2;

    let ratio_at = |k: u64| -> Result<f64> {
        let kf = k as f64;
        let mut r = z / (kf + 1.0);
        for &a in numer {
            r *= a + kf;
        }
        for &b in denom {
            let d = b + kf;
            if d == 0.0 {
                return Err(Error::Domain("denominator parameter is a nonpositive integer"));
            }
            r /= d;
        }
        Ok(r)
    };

    let mut sum = 1.0;
    let mut term = 1.0;
    let mut next = term * ratio_at(0)?;
    let mut k: u64 = 0;
    loop {
        if next == 0.0 {
            // Terminating series, or a numerator parameter hit zero.
            return Ok(SeriesResult { value: sum, terms_used: k + 1, truncation_bound: 0.0 });
        }
        k += 1;
        let prev = term;
        term = next;
        sum += term;
        next = term * ratio_at(k)?;

        if k >= settle {
            let r = (next / term).abs();
            let alternating = next.signum() != term.signum();
            if r < 0.95 || (r < 1.0 && !alternating) {
                let bound = next.abs() / (1.0 - r);
                if term.abs() <= cfg.abs_tol && bound <= cfg.abs_tol {
                    return Ok(SeriesResult { value: sum, terms_used: k + 1, truncation_bound: bound });
                }
            } else if alternating && term.signum() != prev.signum() {
                let paired = (term + next).abs() * 0.5;
                if paired <= cfg.abs_tol && next.abs() <= term.abs() {
                    return Ok(SeriesResult {
                        value: sum + 0.5 * next,
                        terms_used: k + 2,
                        truncation_bound: paired,
                    });
                }
            }
        }
        if k + 1 >= cfg.max_terms {
            return Err(Error::NoConvergence { terms: k + 1, bound: next.abs() });
        }
        if !sum.is_finite() {
            return Err(Error::NoConvergence { terms: k + 1, bound: f64::INFINITY });
        }
    }
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real z < 1.
///
/// Inside |z| ≤ `transform_threshold` the series is summed directly. For
/// z < −threshold the Pfaff transformation
/// ₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1)) maps the argument into
/// (0, 1). Positive z above the threshold is summed directly.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, cfg: &SpecfunConfig) -> Result<f64> {
    if z >= 1.0 {
        return Err(Error::Domain("gauss_2f1 requires z < 1"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain("c is a nonpositive integer"));
    }
    if z >= -cfg.transform_threshold {
        return Ok(hyp_pfq(&[a, b], &[c], z, cfg)?.value);
    }
    let u = z / (z - 1.0);
    let s = hyp_pfq(&[a, c - b], &[c], u, cfg)?;
    Ok((1.0 - z).powf(-a) * s.value)
}

/// Tₙ = Σ_{k=1..n} (−1)^{k+1} q^k / k.
pub fn lemma1_partial_sum(q: f64, n: u32) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..=n {
        pow *= q;
        let t = pow / k as f64;
        if k % 2 == 1 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum
}

/// sin(πx) with the argument reduced exactly before scaling by π.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    let s = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (core::f64::consts::PI * s).sin()
}

/// cos(πx) with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    let r = (x - 2.0 * (0.5 * x).round()).abs();
    let pi = core::f64::consts::PI;
    if r <= 0.25 {
        (pi * r).cos()
    } else if r <= 0.75 {
        (pi * (0.5 - r)).sin()
    } else {
        -(pi * (1.0 - r)).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SpecfunConfig {
        SpecfunConfig::default()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert!((pochhammer(0.5, 3) - 0.5 * 1.5 * 2.5).abs() < 1e-15);
        assert_eq!(pochhammer(-2.0, 5), 0.0);
    }

    #[test]
    fn pfq_elementary() {
        let e = hyp_pfq(&[], &[], 0.3, &cfg()).unwrap();
        assert!((e.value - 0.3f64.exp()).abs() < 1e-14);
        assert!(e.truncation_bound <= 1e-14);
        let one = hyp_pfq(&[1.0, 0.5], &[1.5], 0.0, &cfg()).unwrap();
        assert_eq!(one.value, 1.0);
    }

    #[test]
    fn pfq_log2_at_minus_one() {
        // Direct summation of log(1+a) = Σ (−1)^{k+1} a^k / k at a = 1, paired.
        let mut direct = 0.0;
        for k in 1..=2_000_000u32 {
            let t = 1.0 / k as f64;
            direct += if k % 2 == 1 { t } else { -t };
        }
        direct += 0.5 / 2_000_001.0;
        let r = hyp_pfq(&[1.0, 1.0], &[2.0], -1.0, &cfg()).unwrap();
        assert!((r.value - direct).abs() < 1e-12);
        assert!((r.value - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn pfq_errors() {
        assert!(matches!(hyp_pfq(&[1.0, 1.0], &[2.0], 1.5, &cfg()), Err(Error::Divergence(_))));
        assert!(matches!(hyp_pfq(&[1.0], &[-2.0], 0.5, &cfg()), Err(Error::Domain(_))));
        let tight = SpecfunConfig { max_terms: 10, ..cfg() };
        assert!(matches!(
            hyp_pfq(&[1.0, 1.0], &[2.0], 0.9, &tight),
            Err(Error::NoConvergence { .. })
        ));
        // Terminating series with a negative-integer numerator is a polynomial.
        let poly = hyp_pfq(&[-2.0, 1.0], &[1.0], 3.0, &cfg()).unwrap();
        assert!((poly.value - (1.0f64 - 3.0).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn gauss_2f1_basics() {
        assert_eq!(gauss_2f1(1.0, 0.7, 1.7, 0.0, &cfg()).unwrap(), 1.0);
        let l2 = gauss_2f1(1.0, 1.0, 2.0, -1.0, &cfg()).unwrap();
        assert!((l2 - core::f64::consts::LN_2).abs() < 1e-13);
        // z·₂F₁(1,1;2;−z) = log(1+z) away from the Pfaff switch too.
        for &z in &[0.1, 0.4, 0.7, 3.0, 40.0] {
            let v = z * gauss_2f1(1.0, 1.0, 2.0, -z, &cfg()).unwrap();
            assert!((v - (1.0f64 + z).ln()).abs() < 1e-12, "z={z}");
        }
        assert!(matches!(gauss_2f1(1.0, 1.0, 2.0, 1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(gauss_2f1(1.0, 1.0, -3.0, 0.1, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_partial_sum(0.37, 1), 0.37);
        assert_eq!(lemma1_partial_sum(0.0, 17), 0.0);
        assert_eq!(lemma1_partial_sum(1.0, 2), 0.5);
    }

    #[test]
    fn trig_pi_reduction() {
        for &x in &[0.0, 0.1, 0.5, 0.9, 1.0, 1.3, -0.7, 12.25, 101.5, -33.1] {
            let s = (core::f64::consts::PI * x).sin();
            let c = (core::f64::consts::PI * x).cos();
            assert!((sin_pi(x) - s).abs() < 1e-13, "sin x={x}");
            assert!((cos_pi(x) - c).abs() < 1e-13, "cos x={x}");
        }
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(1e6 + 0.5), 1.0);
    }

    #[test]
    fn config_validation() {
        assert!(SpecfunConfig::default().validate().is_ok());
        assert!(SpecfunConfig { abs_tol: 0.0, ..cfg() }.validate().is_err());
        assert!(SpecfunConfig { transform_threshold: 1.0, ..cfg() }.validate().is_err());
    }
}
