//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the report is always printed; exits nonzero if any criterion fails.

use noncoh_core::capacity::{solve_a2_star, sweep, SweepConfig, A2_EPS};
use noncoh_core::channel::{snr_from_db, ChannelParams, TwoPointInput};
use noncoh_core::mi::{input_entropy, mutual_information};
use noncoh_core::oracle::{mi_monte_carlo, MonteCarloConfig};
use noncoh_core::verify::{
    appendix_b_family, continuation_family, derivative_family, lemma1_family, oracle_i_family, oracle_j_family,
    FamilyReport, Mode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::process::Command;
use std::time::{Duration, Instant};

/// Name, check, runtime budget in seconds (None where the criterion states none).
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn family(rep: &FamilyReport) -> Outcome {
    Outcome {
        pass: rep.passed(),
        detail: format!("{}: worst {:.3e} (tol {:.0e}) over {} points", rep.name, rep.worst, rep.tolerance, rep.points),
    }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { pass: a.pass && b.pass, detail: format!("{}; {}", a.detail, b.detail) }
}

fn mi(a2: f64, x2: f64, sigma2: f64) -> f64 {
    mutual_information(&TwoPointInput::new(a2, x2).unwrap(), &ChannelParams::new(sigma2).unwrap()).unwrap().nats
}

fn c1_oracle() -> Outcome {
    both(family(&oracle_j_family(Mode::Full)), family(&oracle_i_family(Mode::Full)))
}

fn c2_continuation() -> Outcome {
    family(&continuation_family(Mode::Full))
}

fn c3_appendix_b() -> Outcome {
    family(&appendix_b_family())
}

fn c4_derivative() -> Outcome {
    family(&derivative_family(Mode::Full))
}

fn c5_lemma1() -> Outcome {
    let rep = lemma1_family(1000, 2024);
    Outcome { pass: rep.passed() && rep.points == 1000, detail: format!("{} violations in {} cases", rep.failures.len(), rep.points) }
}

fn c6_asymptotics() -> Outcome {
    let points = sweep(&SweepConfig::default(), &ChannelParams::new(1.0).unwrap()).unwrap();
    let i: Vec<f64> = points.iter().map(|p| p.outcome.as_ref().map_or(f64::NAN, |c| c.i_star_nats)).collect();
    let increasing = i.windows(2).all(|w| w[1] > w[0]);
    let at30 = *i.last().unwrap();
    let hi = solve_a2_star(1e6, &SweepConfig::default()).unwrap();
    let di = (hi.i_star_nats - std::f64::consts::LN_2).abs();
    let da = (hi.a2_star - 0.5).abs();
    Outcome {
        pass: increasing && at30 >= 0.64 && di <= 1e-2 && da <= 2e-2,
        detail: format!(
            "i*(30 dB) = {at30:.6}, increasing = {increasing}; at SNR 1e6 |i*-log2| = {di:.2e}, |a2*-0.5| = {da:.2e}"
        ),
    }
}

fn c7_entropy_limit() -> Outcome {
    let hb = input_entropy(&TwoPointInput::new(0.3, 1.0).unwrap());
    let gaps: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|&x2| (mi(0.3, x2, 1.0) - hb).abs()).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Outcome {
        pass: decreasing && gaps[2] <= 2e-3,
        detail: format!("|I - Hb(0.3)| = {:.3e}, {:.3e}, {:.3e}", gaps[0], gaps[1], gaps[2]),
    }
}

fn c8_scale_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a2 = rng.random_range(0.02..0.98);
        let x2: f64 = rng.random_range(0.1..20.0);
        let s = rng.random_range(0.2..5.0);
        let k: f64 = rng.random_range(0.1..10.0);
        let d = (mi(a2, x2, s) - mi(a2, k * x2, k * k * s)).abs();
        worst = worst.max(d);
    }
    Outcome { pass: worst <= 1e-12, detail: format!("max |dI| = {worst:.3e} over 20 configs") }
}

fn c9_solver_vs_grid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let snrs: Vec<f64> = (0..10).map(|_| rng.random_range(-10.0..30.0)).collect();
    let n = 10_000;
    let grid: Vec<f64> = (0..n).map(|k| A2_EPS + (1.0 - 2.0 * A2_EPS) * k as f64 / (n - 1) as f64).collect();
    let worst = snrs
        .par_iter()
        .map(|&db| {
            let snr = snr_from_db(db);
            let solved = solve_a2_star(snr, &SweepConfig::default()).unwrap().i_star_nats;
            let best = grid.iter().map(|&a| mi(a, (snr / a).sqrt(), 1.0)).fold(f64::NEG_INFINITY, f64::max);
            (solved - best).abs()
        })
        .reduce(|| 0.0, f64::max);
    Outcome { pass: worst <= 1e-6, detail: format!("max |i* - grid max| = {worst:.3e} over 10 SNRs") }
}

fn c10_monte_carlo() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let configs: Vec<(f64, f64, f64)> =
        (0..40).map(|_| (rng.random_range(0.05..0.95), rng.random_range(0.2..10.0), rng.random_range(0.5..2.0))).collect();
    let within = configs
        .par_iter()
        .enumerate()
        .filter(|(k, &(a2, x2, s))| {
            let inp = TwoPointInput::new(a2, x2).unwrap();
            let ch = ChannelParams::new(s).unwrap();
            let est = mi_monte_carlo(&inp, &ch, &MonteCarloConfig { samples: 1_000_000, seed: 1000 + *k as u64 });
            (est.estimate - mi(a2, x2, s)).abs() <= 4.0 * est.std_error
        })
        .count();
    Outcome { pass: within >= 38, detail: format!("{within}/40 within 4 standard errors") }
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let st = Command::new(env!("CARGO_BIN_EXE_noncoh"))
            .args(["sweep", "--from-db", "-10", "--to-db", "30", "--step-db", "1", "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        st.success().then(|| std::fs::read(&out).unwrap())
    };
    let a = run("a.csv");
    let b = run("b.csv");
    let identical = a.is_some() && a == b;
    let t = Instant::now();
    let st = Command::new(env!("CARGO_BIN_EXE_noncoh")).args(["verify", "--quick"]).output().unwrap().status;
    let dt = t.elapsed();
    Outcome {
        pass: identical && st.success() && dt <= Duration::from_secs(30),
        detail: format!("sweep byte-identical = {identical}; verify --quick exit {:?} in {:.2} s", st.code(), dt.as_secs_f64()),
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1  closed form vs quadrature", c1_oracle, Some(60)),
        ("2  continuation formula", c2_continuation, Some(5)),
        ("3  pi/sin identity", c3_appendix_b, Some(10)),
        ("4  derivative vs finite differences", c4_derivative, Some(10)),
        ("5  partial-sum bounds", c5_lemma1, Some(1)),
        ("6  high-SNR asymptotics", c6_asymptotics, None),
        ("7  large-x2 entropy limit", c7_entropy_limit, None),
        ("8  scale invariance", c8_scale_invariance, None),
        ("9  solver vs brute force", c9_solver_vs_grid, None),
        ("10 Monte-Carlo concordance", c10_monte_carlo, Some(120)),
        ("11 determinism", c11_determinism, None),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        let in_time = budget.is_none_or(|b| secs <= b as f64);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let limit = budget.map_or(String::new(), |b| format!(", budget {b} s"));
        println!("[{}] {name}: {} ({secs:.2} s{limit})", if pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
