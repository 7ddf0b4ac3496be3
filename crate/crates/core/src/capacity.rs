//! Capacity mode: maximise I over a₂ with x₂² = P/a₂ at fixed SNR = P/σ².
//!
//! The maximiser solves ∂I/∂a₂ = 0. Every sign change of the derivative on a
//! logit-spaced grid is refined with Brent's method and the root with the
//! largest I wins; without a sign change a golden-section search on I is used.

use crate::channel::{snr_from_db, snr_of, snr_to_db, ChannelParams};
use crate::mi::{mi_compact, mi_derivative_compact, CompactParams};
use crate::{Error, Result};
use alloc::vec::Vec;
use num_traits::Float;

/// Search interval for a₂ is [A2_EPS, 1 − A2_EPS].
pub const A2_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub solver_tol: f64,
    pub grid_points_for_bracketing: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            snr_db_start: -10.0,
            snr_db_stop: 30.0,
            snr_db_step: 1.0,
            solver_tol: 1e-10,
            grid_points_for_bracketing: 64,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.snr_db_step > 0.0) {
            return Err(Error::InvalidParameter("snr_db_step must be positive"));
        }
        if !(self.snr_db_start <= self.snr_db_stop) {
            return Err(Error::InvalidParameter("snr_db_start must not exceed snr_db_stop"));
        }
        if !(self.solver_tol > 0.0) {
            return Err(Error::InvalidParameter("solver_tol must be positive"));
        }
        if self.grid_points_for_bracketing < 2 {
            return Err(Error::InvalidParameter("grid_points_for_bracketing must be at least 2"));
        }
        Ok(())
    }

    /// start, start+step, … up to stop (inclusive, with a small slack for
    /// rounding in the step count).
    pub fn snr_grid_db(&self) -> Vec<f64> {
        let span = (self.snr_db_stop - self.snr_db_start) / self.snr_db_step;
        let n = (span + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.snr_db_start + k as f64 * self.snr_db_step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// SNR ≤ 0 dB: two mass points achieve capacity.
    Capacity,
    /// 0 < SNR ≤ 10 dB: a lower bound within a few hundredths of a nat.
    LowerBound,
    /// Above 10 dB: only the best two-point input.
    TwoPointOptimum,
}

impl Regime {
    pub fn from_db(snr_db: f64) -> Self {
        if snr_db <= 0.0 {
            Regime::Capacity
        } else if snr_db <= 10.0 {
            Regime::LowerBound
        } else {
            Regime::TwoPointOptimum
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Capacity => "Capacity",
            Regime::LowerBound => "LowerBound",
            Regime::TwoPointOptimum => "TwoPointOptimum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub snr_db: f64,
    pub snr_linear: f64,
    pub a2_star: f64,
    pub x2_star: f64,
    pub i_star_nats: f64,
    pub regime: Regime,
    pub roots_found: usize,
    /// |∂I/∂a₂| at a2_star.
    pub solver_residual: f64,
    /// No sign change was bracketed and golden-section search was used.
    pub golden_fallback: bool,
}

/// I(a₂) at linear SNR with σ² = 1 and x₂² = SNR/a₂.
pub fn capacity_mi(a2: f64, snr: f64) -> Result<f64> {
    mi_compact(&CompactParams::capacity(a2, snr))
}

/// ∂I/∂a₂ along x₂² = SNR/a₂.
pub fn capacity_derivative(a2: f64, snr: f64) -> Result<f64> {
    mi_derivative_compact(&CompactParams::capacity(a2, snr))
}

fn logit_grid(n: usize) -> Vec<f64> {
    let lo = (A2_EPS / (1.0 - A2_EPS)).ln();
    let hi = -lo;
    (0..n)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let a = 1.0 / (1.0 + (-t).exp());
            a.clamp(A2_EPS, 1.0 - A2_EPS)
        })
        .collect()
}

/// Brent's method on [a, b] with f(a)·f(b) < 0. Stops when |f| ≤ tol or the
/// bracket has collapsed to rounding width.
fn brent<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<f64> {
    if fa.abs() < fb.abs() {
        core::mem::swap(&mut a, &mut b);
        core::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        let width_tol = 4.0 * f64::EPSILON * b.abs();
        if (b - a).abs() <= width_tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let mid = 0.5 * (a + b);
        let outside = if a < b { s < (3.0 * a + b) / 4.0 || s > b } else { s > (3.0 * a + b) / 4.0 || s < b };
        if outside
            || (bisected && (s - b).abs() >= 0.5 * (b - c).abs())
            || (!bisected && (s - b).abs() >= 0.5 * (c - d).abs())
            || (bisected && (b - c).abs() < width_tol)
            || (!bisected && (c - d).abs() < width_tol)
        {
            s = mid;
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

/// Maximise f on [lo, hi] by golden-section search.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Optimal a₂ at linear SNR with σ² = 1.
pub fn solve_a2_star(snr_linear: f64, cfg: &SweepConfig) -> Result<CapacityPoint> {
    if !(snr_linear > 0.0) || !snr_linear.is_finite() {
        return Err(Error::InvalidParameter("snr must be positive"));
    }
    cfg.validate()?;
    let deriv = |a: f64| capacity_derivative(a, snr_linear);
    let mi = |a: f64| capacity_mi(a, snr_linear);

    let grid = logit_grid(cfg.grid_points_for_bracketing);
    let values: Vec<f64> = grid.iter().map(|&a| deriv(a)).collect::<Result<_>>()?;

    let mut candidates: Vec<f64> = Vec::new();
    for k in 0..grid.len() - 1 {
        let (fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 {
            candidates.push(grid[k]);
        } else if fa * fb < 0.0 {
            candidates.push(brent(deriv, grid[k], grid[k + 1], fa, fb, cfg.solver_tol)?);
        }
    }
    let roots_found = candidates.len();
    let golden_fallback = roots_found == 0;
    if golden_fallback {
        candidates.push(golden_max(mi, A2_EPS, 1.0 - A2_EPS, 1e-12)?);
    }

    let mut best: Option<(f64, f64)> = None;
    for &a in candidates.iter().chain([grid[0], grid[grid.len() - 1]].iter()) {
        let i = mi(a)?;
        if best.is_none_or(|(_, bi)| i > bi) {
            best = Some((a, i));
        }
    }
    let (a2_star, i_star) = best.ok_or(Error::SolverFailure(snr_linear))?;
    if !(i_star > 0.0) {
        return Err(Error::SolverFailure(snr_linear));
    }
    Ok(CapacityPoint {
        snr_db: snr_to_db(snr_linear),
        snr_linear,
        a2_star,
        x2_star: (snr_linear / a2_star).sqrt(),
        i_star_nats: i_star,
        regime: Regime::from_db(snr_to_db(snr_linear)),
        roots_found,
        solver_residual: deriv(a2_star)?.abs(),
        golden_fallback,
    })
}

/// Optimal a₂ for a channel with a power budget; x₂* carries the channel's
/// own scale.
pub fn solve_capacity_point(ch: &ChannelParams, cfg: &SweepConfig) -> Result<CapacityPoint> {
    let snr = snr_of(ch)?;
    let mut pt = solve_a2_star(snr, cfg)?;
    pt.x2_star = (ch.power_budget.unwrap_or(snr) / pt.a2_star).sqrt();
    Ok(pt)
}

/// One solved (or failed) SNR of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub outcome: Result<CapacityPoint>,
}

/// Solve a single sweep point at `snr_db` for noise power `sigma2`.
pub fn sweep_point(snr_db: f64, sigma2: f64, cfg: &SweepConfig) -> SweepPoint {
    let snr = snr_from_db(snr_db);
    let outcome = ChannelParams::with_power(sigma2, snr * sigma2).and_then(|ch| solve_capacity_point(&ch, cfg)).map(|mut p| {
        // Report the grid value exactly rather than its dB round trip.
        p.snr_db = snr_db;
        p.regime = Regime::from_db(snr_db);
        p
    });
    SweepPoint { snr_db, outcome }
}

/// All points of the configured SNR grid, in ascending order.
pub fn sweep(cfg: &SweepConfig, ch: &ChannelParams) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    Ok(cfg.snr_grid_db().into_iter().map(|db| sweep_point(db, ch.sigma2, cfg)).collect())
}

/// Indices k where i_star drops from point k−1 to point k by more than 1e−9.
pub fn monotonicity_violations(points: &[SweepPoint]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev: Option<f64> = None;
    for (k, p) in points.iter().enumerate() {
        if let Ok(cp) = &p.outcome {
            if let Some(v) = prev {
                if cp.i_star_nats < v - 1e-9 {
                    out.push(k);
                }
            }
            prev = Some(cp.i_star_nats);
        }
    }
    out
}

/// Evenly spaced a₂ grid of `points` values strictly inside (0, 1).
pub fn profile_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|k| k as f64 / (points + 1) as f64).collect()
}

/// (a₂, I) pairs along x₂² = SNR/a₂.
pub fn mi_profile(snr_linear: f64, a2_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    a2_grid.iter().map(|&a| Ok((a, capacity_mi(a, snr_linear)?))).collect()
}
