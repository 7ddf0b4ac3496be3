//! Channel and input model.
//!
//! The magnitude channel has Rayleigh-type conditional density
//! f(y|x) = 2y/(x²+σ²)·exp(−y²/(x²+σ²)); the input puts mass a₁ = 1−a₂ at 0 and
//! a₂ at x₂.

use crate::{Error, Result};
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub sigma2: f64,
    pub power_budget: Option<f64>,
}

impl ChannelParams {
    pub fn new(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidParameter("sigma2 must be positive"));
        }
        Ok(Self { sigma2, power_budget: None })
    }

    pub fn with_power(sigma2: f64, power: f64) -> Result<Self> {
        if !(power > 0.0) || !power.is_finite() {
            return Err(Error::InvalidParameter("power budget must be positive"));
        }
        Ok(Self { power_budget: Some(power), ..Self::new(sigma2)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointInput {
    pub a2: f64,
    pub x2: f64,
}

impl TwoPointInput {
    pub fn new(a2: f64, x2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a2) {
            return Err(Error::InvalidParameter("a2 must lie in [0, 1]"));
        }
        if !(x2 >= 0.0) || !x2.is_finite() {
            return Err(Error::InvalidParameter("x2 must be finite and nonnegative"));
        }
        Ok(Self { a2, x2 })
    }

    pub fn a1(&self) -> f64 {
        1.0 - self.a2
    }

    /// E[X²].
    pub fn second_moment(&self) -> f64 {
        self.a2 * self.x2 * self.x2
    }

    pub fn is_degenerate(&self) -> bool {
        self.a2 <= 0.0 || self.a2 >= 1.0 || self.x2 == 0.0
    }
}

/// Evaluation route for J(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// α = 1/n: finite-sum closed form.
    CaseI,
    /// β < 1.
    CaseII,
    /// β ≥ 1, or any β when routed explicitly.
    CaseIII,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseConfig {
    pub snap_tol: f64,
    pub guard_band: f64,
    pub n_max: u32,
}

impl Default for CaseConfig {
    fn default() -> Self {
        Self { snap_tol: 1e-9, guard_band: 1e-5, n_max: 64 }
    }
}

impl CaseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.snap_tol > 0.0) || !(self.guard_band >= self.snap_tol) {
            return Err(Error::InvalidParameter("need 0 < snap_tol <= guard_band"));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub alpha: f64,
    pub beta: f64,
    pub y_star_sq: Option<f64>,
    pub case: Case,
    /// n with α = 1/n when `case` is CaseI.
    pub n: Option<u32>,
    /// α lies within the guard band of some 1/n but outside the snap tolerance.
    pub near_singular: bool,
}

/// Nearest n ≤ n_max to 1/α and the distance |α − 1/n|.
pub fn nearest_reciprocal(alpha: f64, n_max: u32) -> Option<(u32, f64)> {
    let inv = 1.0 / alpha;
    if !(inv >= 0.5) {
        return None;
    }
    let lo = inv.floor().max(1.0);
    let mut best: Option<(u32, f64)> = None;
    for n in [lo, lo + 1.0] {
        if n < 1.0 || n > n_max as f64 {
            continue;
        }
        let d = (alpha - 1.0 / n).abs();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((n as u32, d));
        }
    }
    best
}

pub fn derive_params(x: f64, input: &TwoPointInput, ch: &ChannelParams) -> Result<DerivedParams> {
    derive_params_with(x, input, ch, &CaseConfig::default())
}

pub fn derive_params_with(
    x: f64,
    input: &TwoPointInput,
    ch: &ChannelParams,
    cfg: &CaseConfig,
) -> Result<DerivedParams> {
    if input.is_degenerate() {
        return Err(Error::DegenerateInput);
    }
    if x != 0.0 && x != input.x2 {
        return Err(Error::InvalidParameter("x must be one of the mass points 0 or x2"));
    }
    let s = ch.sigma2;
    let x22 = input.x2 * input.x2;
    let c = x22 + s;
    let v = x * x + s;
    let alpha = (x22 / c) * (v / s);
    let beta = (input.a2 / input.a1()) * (s / c);
    let y_star_sq = if beta < 1.0 { Some(-(s * c / x22) * beta.ln()) } else { None };

    let mut case = if beta < 1.0 { Case::CaseII } else { Case::CaseIII };
    let mut n = None;
    let mut near_singular = false;
    if let Some((k, d)) = nearest_reciprocal(alpha, cfg.n_max) {
        if d < cfg.snap_tol {
            case = Case::CaseI;
            n = Some(k);
        } else if d < cfg.guard_band {
            near_singular = true;
        }
    }
    Ok(DerivedParams { alpha, beta, y_star_sq, case, n, near_singular })
}

pub fn transition_density(y: f64, x: f64, ch: &ChannelParams) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let v = x * x + ch.sigma2;
    2.0 * y / v * (-y * y / v).exp()
}

/// ln f(y|x), finite for y > 0.
pub fn log_transition_density(y: f64, x: f64, ch: &ChannelParams) -> f64 {
    let v = x * x + ch.sigma2;
    (2.0 * y / v).ln() - y * y / v
}

pub fn snr_of(ch: &ChannelParams) -> Result<f64> {
    ch.power_budget.map(|p| p / ch.sigma2).ok_or(Error::MissingPowerBudget)
}

pub fn snr_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn snr_to_db(snr: f64) -> f64 {
    10.0 * snr.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: f64) -> ChannelParams {
        ChannelParams::new(s).unwrap()
    }

    #[test]
    fn derived_examples() {
        let inp = TwoPointInput::new(0.3, 1.0).unwrap();
        let d = derive_params(1.0, &inp, &ch(1.0)).unwrap();
        assert!((d.alpha - 1.0).abs() < 1e-15);
        assert_eq!(d.case, Case::CaseI);

        let inp = TwoPointInput::new(0.5, 1.0).unwrap();
        let d = derive_params(0.0, &inp, &ch(1.0)).unwrap();
        assert!((d.alpha - 0.5).abs() < 1e-15);
        assert!((d.beta - 0.5).abs() < 1e-15);
        assert!((d.y_star_sq.unwrap() - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert_eq!(d.n, Some(2));

        let inp = TwoPointInput::new(0.9, 3.0).unwrap();
        let d = derive_params(0.0, &inp, &ch(1.0)).unwrap();
        assert!((d.beta - 0.9).abs() < 1e-14);
        assert_eq!(d.case, Case::CaseII);
    }

    #[test]
    fn crossover_at_y_star() {
        let inp = TwoPointInput::new(0.35, 1.7).unwrap();
        let c = ch(0.8);
        let d = derive_params(0.0, &inp, &c).unwrap();
        let y2 = d.y_star_sq.unwrap();
        let cc = 1.7 * 1.7 + 0.8;
        let lhs = (-y2 / 0.8).exp() * inp.a1() / 0.8;
        let rhs = (-y2 / cc).exp() * inp.a2 / cc;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn degenerate_and_invalid() {
        let c = ch(1.0);
        for inp in [TwoPointInput::new(0.0, 1.0), TwoPointInput::new(1.0, 1.0), TwoPointInput::new(0.5, 0.0)] {
            assert_eq!(derive_params(0.0, &inp.unwrap(), &c), Err(Error::DegenerateInput));
        }
        assert!(TwoPointInput::new(1.5, 1.0).is_err());
        assert!(ChannelParams::new(0.0).is_err());
        let inp = TwoPointInput::new(0.5, 1.0).unwrap();
        assert!(derive_params(0.5, &inp, &c).is_err());
    }

    #[test]
    fn guard_band_flag() {
        // α at x = 0 is x2²/(x2²+σ²); choose x2² so α = 1/2 + 1e-7.
        let a = 0.5 + 1e-7;
        let x2 = (a / (1.0 - a)).sqrt();
        let inp = TwoPointInput::new(0.4, x2).unwrap();
        let d = derive_params(0.0, &inp, &ch(1.0)).unwrap();
        assert!(d.near_singular);
        assert_ne!(d.case, Case::CaseI);
    }

    #[test]
    fn density_values() {
        let c = ch(1.0);
        assert_eq!(transition_density(0.0, 0.3, &c), 0.0);
        assert!((transition_density(1.0, 0.0, &c) - 2.0 * (-1f64).exp()).abs() < 1e-15);
        assert!((log_transition_density(1.0, 0.0, &c) - (2.0 * (-1f64).exp()).ln()).abs() < 1e-15);
    }

    #[test]
    fn snr() {
        assert_eq!(snr_of(&ChannelParams::with_power(1.0, 1.0).unwrap()).unwrap(), 1.0);
        assert_eq!(snr_of(&ch(1.0)), Err(Error::MissingPowerBudget));
        assert_eq!(snr_from_db(0.0), 1.0);
        assert!((snr_from_db(10.0) - 10.0).abs() < 1e-14);
    }
}
