//! Residual families shared by the `verify` command and the test suites.
//!
//! Each family evaluates one identity or oracle comparison over a fixed grid
//! and reports its worst residual against a tolerance.

use crate::channel::{ChannelParams, TwoPointInput};
use crate::mi::{
    appendix_b_identity_residual, continuation_residual, j_case2, j_case3, j_routed, mi_derivative_a2,
    mutual_information,
};
use crate::oracle::{fd_derivative, j_quadrature, mi_quadrature, FdOrder, QuadratureConfig};
use crate::specfun::lemma1_partial_sum;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub name: &'static str,
    pub points: usize,
    pub worst: f64,
    pub tolerance: f64,
    /// Where the worst residual occurred.
    pub worst_at: String,
    /// Points that failed to evaluate or exceeded the tolerance.
    pub failures: Vec<String>,
}

impl FamilyReport {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, points: 0, worst: 0.0, tolerance, worst_at: String::new(), failures: Vec::new() }
    }

    fn record(&mut self, residual: f64, at: String) {
        self.points += 1;
        if !(residual <= self.tolerance) {
            self.failures.push(format!("{at}: residual {residual:e}"));
        }
        if !(residual <= self.worst) {
            self.worst = residual;
            self.worst_at = at;
        }
    }

    fn error(&mut self, at: String, err: crate::Error) {
        self.points += 1;
        self.worst = f64::INFINITY;
        self.failures.push(format!("{at}: {err}"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.points > 0
    }
}

/// (a₂, x₂, σ²) grid with a₂ ∈ [0.02, 0.98] and x₂/σ ∈ [0.1, 30], log-spaced
/// in x₂/σ and cycling σ² through {1, ½, 2}. 200 points in full mode.
pub fn oracle_grid(mode: Mode) -> Vec<(f64, f64, f64)> {
    let (na, nx) = match mode {
        Mode::Full => (20, 10),
        Mode::Quick => (8, 5),
    };
    let sig = [1.0, 0.5, 2.0];
    let mut out = Vec::with_capacity(na * nx);
    for i in 0..na {
        let a2 = 0.02 + 0.96 * i as f64 / (na - 1) as f64;
        for j in 0..nx {
            let ratio = 0.1 * 300f64.powf(j as f64 / (nx - 1) as f64);
            let s: f64 = sig[(i + j) % 3];
            out.push((a2, ratio * s.sqrt(), s));
        }
    }
    out
}

/// Moves α so that 1/α is at least 0.1 away from an integer.
fn nudge_off_guard(alpha: f64) -> f64 {
    let p = 1.0 / alpha;
    let gap = p - p.round();
    if gap.abs() < 0.1 {
        1.0 / (p.round() + 0.1f64.copysign(gap))
    } else {
        alpha
    }
}

/// (α, β) grid for the continuation identity: α ∈ [0.3, 8], β ∈ [0.05, 10],
/// log-spaced, with 1/α kept away from the integers. 100 points in full mode.
///
/// The identity balances terms as large as πβ^{1/α}/|sin(π/α)|, so its
/// absolute residual in double precision is about ε times that size; these
/// ranges keep the largest term below ~1e6.
pub fn continuation_grid(mode: Mode) -> Vec<(f64, f64)> {
    let n = match mode {
        Mode::Full => 10,
        Mode::Quick => 5,
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let alpha = nudge_off_guard(0.3 * (8.0f64 / 0.3).powf(i as f64 / (n - 1) as f64));
        for j in 0..n {
            out.push((alpha, 0.05 * 200f64.powf(j as f64 / (n - 1) as f64)));
        }
    }
    out
}

pub const APPENDIX_B_ALPHAS: [f64; 7] = [0.3, 0.6, 1.4, 2.0, 3.7, 5.5, 8.9];

pub fn oracle_j_family(mode: Mode) -> FamilyReport {
    let mut rep = FamilyReport::new("oracle_j", 1e-8);
    let cfg = QuadratureConfig::default();
    for (a2, x2, s) in oracle_grid(mode) {
        let inp = TwoPointInput { a2, x2 };
        let ch = ChannelParams { sigma2: s, power_budget: None };
        for x in [0.0, x2] {
            let at = format!("a2={a2} x2={x2} sigma2={s} x={x}");
            match (j_routed(x, &inp, &ch), j_quadrature(x, &inp, &ch, &cfg)) {
                (Ok(e), Ok(q)) => rep.record((e.value - q).abs(), at),
                (Err(e), _) | (_, Err(e)) => rep.error(at, e),
            }
        }
    }
    rep
}

pub fn oracle_i_family(mode: Mode) -> FamilyReport {
    let mut rep = FamilyReport::new("oracle_i", 1e-7);
    let cfg = QuadratureConfig::default();
    for (a2, x2, s) in oracle_grid(mode) {
        let inp = TwoPointInput { a2, x2 };
        let ch = ChannelParams { sigma2: s, power_budget: None };
        let at = format!("a2={a2} x2={x2} sigma2={s}");
        match (mutual_information(&inp, &ch), mi_quadrature(&inp, &ch, &cfg)) {
            (Ok(r), Ok(q)) => rep.record((r.nats - q).abs(), at),
            (Err(e), _) | (_, Err(e)) => rep.error(at, e),
        }
    }
    rep
}

/// Case II and Case III agree wherever both are evaluated and the Case II
/// pole term is moderate.
pub fn route_consistency_family(mode: Mode) -> FamilyReport {
    let mut rep = FamilyReport::new("route_consistency", 1e-8);
    for (a2, x2, s) in oracle_grid(mode) {
        let inp = TwoPointInput { a2, x2 };
        let ch = ChannelParams { sigma2: s, power_budget: None };
        for x in [0.0, x2] {
            let Ok(d) = crate::channel::derive_params(x, &inp, &ch) else { continue };
            let pole = core::f64::consts::PI * (d.beta.ln() / d.alpha).exp()
                / crate::specfun::sin_pi(1.0 / d.alpha).abs();
            if pole > crate::mi::POLE_MAGNITUDE_LIMIT {
                continue;
            }
            if let (Ok(a), Ok(b)) = (j_case2(x, &inp, &ch), j_case3(x, &inp, &ch)) {
                rep.record((a - b).abs(), format!("a2={a2} x2={x2} sigma2={s} x={x}"));
            }
        }
    }
    rep
}

pub fn continuation_family(mode: Mode) -> FamilyReport {
    let mut rep = FamilyReport::new("continuation", 1e-8);
    for (alpha, beta) in continuation_grid(mode) {
        let at = format!("alpha={alpha} beta={beta}");
        match continuation_residual(alpha, beta) {
            Ok(r) => rep.record(r.abs(), at),
            Err(e) => rep.error(at, e),
        }
    }
    rep
}

pub fn appendix_b_family() -> FamilyReport {
    let mut rep = FamilyReport::new("appendix_b", 1e-8);
    for alpha in APPENDIX_B_ALPHAS {
        let at = format!("alpha={alpha}");
        match appendix_b_identity_residual(alpha) {
            Ok(r) => rep.record(r.abs(), at),
            Err(e) => rep.error(at, e),
        }
    }
    rep
}

/// 0 ≤ Tₙ ≤ q for random q ∈ [0, 1], n ∈ [1, 500]; the residual is the size
/// of any violation.
pub fn lemma1_family(cases: usize, seed: u64) -> FamilyReport {
    let mut rep = FamilyReport::new("lemma1", 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let q: f64 = rng.random();
        let n: u32 = rng.random_range(1..=500);
        let t = lemma1_partial_sum(q, n);
        let violation = (-t).max(t - q).max(0.0);
        rep.record(violation, format!("q={q} n={n}"));
    }
    rep
}

/// Random (a₂, x₂, σ², mode) points; x₂ is either fixed or tied to a₂ through
/// a power budget.
pub fn derivative_points(count: usize, seed: u64) -> Vec<(TwoPointInput, ChannelParams)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a2 = rng.random_range(0.05..0.95);
            let x2: f64 = rng.random_range(0.2..10.0);
            let s = rng.random_range(0.5..2.0);
            let power = if rng.random::<bool>() { Some(a2 * x2 * x2) } else { None };
            (TwoPointInput { a2, x2 }, ChannelParams { sigma2: s, power_budget: power })
        })
        .collect()
}

/// Relative error of the analytic derivative against a 5-point central
/// difference of the routed I, with denominator max(|fd|, 1e−4).
pub fn derivative_residual(inp: &TwoPointInput, ch: &ChannelParams) -> crate::Result<f64> {
    let an = mi_derivative_a2(inp, ch)?;
    let err = core::cell::Cell::new(None);
    let f = |a: f64| {
        let x2 = ch.power_budget.map_or(inp.x2, |p| (p / a).sqrt());
        match mutual_information(&TwoPointInput { a2: a, x2 }, ch) {
            Ok(r) => r.nats,
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        }
    };
    let fd = fd_derivative(f, inp.a2, FdOrder::Central5);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok((an - fd).abs() / fd.abs().max(1e-4))
}

pub fn derivative_family(mode: Mode) -> FamilyReport {
    let count = match mode {
        Mode::Full => 50,
        Mode::Quick => 15,
    };
    let mut rep = FamilyReport::new("derivative", 1e-5);
    for (inp, ch) in derivative_points(count, 0x5eed) {
        let at = format!("a2={} x2={} sigma2={} power={:?}", inp.a2, inp.x2, ch.sigma2, ch.power_budget);
        match derivative_residual(&inp, &ch) {
            Ok(r) => rep.record(r, at),
            Err(e) => rep.error(at, e),
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub mode: Mode,
    pub families: Vec<FamilyReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyReport::passed)
    }
}

/// Every family in order.
pub fn run_all(mode: Mode) -> VerifyReport {
    let lemma_cases = match mode {
        Mode::Full => 1000,
        Mode::Quick => 200,
    };
    VerifyReport {
        mode,
        families: alloc::vec![
            oracle_j_family(mode),
            oracle_i_family(mode),
            route_consistency_family(mode),
            continuation_family(mode),
            appendix_b_family(),
            lemma1_family(lemma_cases, 1),
            derivative_family(mode),
        ],
    }
}
