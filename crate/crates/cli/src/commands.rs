use crate::config::Config;
use crate::output::{fmt17, record};
use crate::{Cli, Command, DerivArgs, McArgs, MiArgs, ProfileArgs, SweepArgs, VerifyArgs};
use anyhow::anyhow;
use noncoh_core::capacity::{
    capacity_derivative, capacity_mi, mi_profile, profile_grid, sweep_point, SweepConfig, SweepPoint,
};
use noncoh_core::channel::{snr_from_db, CaseConfig, ChannelParams, TwoPointInput};
use noncoh_core::mi::{input_entropy, mi_derivative_a2, mutual_information_with, JEvaluation};
use noncoh_core::oracle::{fd_derivative, mi_monte_carlo, mi_quadrature, FdOrder, MonteCarloConfig, QuadratureConfig};
use noncoh_core::verify::{run_all, Mode};
use noncoh_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::io::Write;

/// Largest tolerated |closed form − quadrature| for `mi --verify`.
pub const MI_VERIFY_TOL: f64 = 1e-7;

pub const SWEEP_HEADER: [&str; 8] =
    ["snr_db", "snr_linear", "a2_star", "x2_star", "i_star_nats", "regime", "roots_found", "solver_residual"];

pub struct Failure {
    pub code: u8,
    pub error: Option<anyhow::Error>,
}

impl Failure {
    fn usage(e: impl Into<anyhow::Error>) -> Self {
        Self { code: 2, error: Some(e.into()) }
    }

    fn consistency(e: impl Into<anyhow::Error>) -> Self {
        Self { code: 3, error: Some(e.into()) }
    }

    fn io(e: impl Into<anyhow::Error>) -> Self {
        Self { code: 1, error: Some(e.into()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Domain(_) | Error::MissingPowerBudget => Self::usage(e),
            _ => Self::consistency(e),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(Failure::usage)?,
        None => Config::default(),
    };
    let ctx = Ctx { json: cli.json, cfg };
    match &cli.command {
        Command::Mi(a) => ctx.mi(a),
        Command::Deriv(a) => ctx.deriv(a),
        Command::Profile(a) => ctx.profile(a),
        Command::Sweep(a) => ctx.sweep(a),
        Command::Verify(a) => ctx.verify(a),
        Command::Mc(a) => ctx.mc(a),
    }
}

struct Ctx {
    json: bool,
    cfg: Config,
}

impl Ctx {
    fn resolve<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, Failure> {
        self.cfg.resolve(flag, key, default).map_err(Failure::usage)
    }

    fn sigma2(&self, flag: Option<f64>) -> Result<f64, Failure> {
        self.resolve(flag, "sigma2", 1.0)
    }

    fn case_config(&self) -> Result<CaseConfig, Failure> {
        let d = CaseConfig::default();
        let c = CaseConfig {
            snap_tol: self.resolve(None, "snap_tol", d.snap_tol)?,
            guard_band: self.resolve(None, "guard_band", d.guard_band)?,
            n_max: self.resolve(None, "n_max", d.n_max)?,
        };
        c.validate()?;
        Ok(c)
    }

    fn quad_config(&self) -> Result<QuadratureConfig, Failure> {
        let d = QuadratureConfig::default();
        let c = QuadratureConfig {
            abs_tol: self.resolve(None, "quad_abs_tol", d.abs_tol)?,
            max_subdivisions: self.resolve(None, "quad_max_subdivisions", d.max_subdivisions)?,
        };
        c.validate()?;
        Ok(c)
    }

    fn sweep_config(&self, base: SweepConfig) -> Result<SweepConfig, Failure> {
        let c = SweepConfig {
            solver_tol: self.resolve(None, "solver_tol", base.solver_tol)?,
            grid_points_for_bracketing: self.resolve(
                None,
                "grid_points_for_bracketing",
                base.grid_points_for_bracketing,
            )?,
            ..base
        };
        c.validate()?;
        Ok(c)
    }

    fn emit(&self, command: &str, inputs: Value, results: Value, diagnostics: Value, text: impl FnOnce() -> String) {
        if self.json {
            let rec = record(command, inputs, results, diagnostics);
            println!("{}", serde_json::to_string_pretty(&rec).expect("json values serialize"));
        } else {
            print!("{}", text());
        }
    }

    fn mi(&self, a: &MiArgs) -> Outcome {
        let sigma2 = self.sigma2(a.sigma2)?;
        let ch = ChannelParams::new(sigma2)?;
        let input = TwoPointInput::new(a.a2, a.x2)?;
        let case_cfg = self.case_config()?;
        let r = mutual_information_with(&input, &ch, &case_cfg)?;
        let hx = input_entropy(&input);
        let hxy = (hx - r.nats).max(0.0);
        if !(r.nats <= hx + 1e-10) {
            return Err(Failure::consistency(anyhow!("I = {} exceeds H(X) = {}", r.nats, hx)));
        }
        let oracle = if a.verify {
            let q = if input.is_degenerate() { 0.0 } else { mi_quadrature(&input, &ch, &self.quad_config()?)? };
            Some((q, (r.nats - q).abs()))
        } else {
            None
        };

        let diag: Vec<Value> = r.diagnostics.iter().flatten().map(j_diag).collect();
        let mut results = json!({
            "nats": r.nats,
            "h_x": hx,
            "h_x_given_y": hxy,
            "j0": r.j0,
            "j_x2": r.j_x2,
            "route_j0": r.case_j0.name(),
            "route_jx2": r.case_jx2.name(),
        });
        if let Some((q, d)) = oracle {
            results["oracle_nats"] = json!(q);
            results["oracle_delta"] = json!(d);
            results["oracle_tolerance"] = json!(MI_VERIFY_TOL);
        }
        self.emit(
            "mi",
            json!({"a2": a.a2, "x2": a.x2, "sigma2": sigma2, "verify": a.verify}),
            results,
            json!(diag),
            || {
                let mut s = format!(
                    "I(X;Y)   {} nats\nH(X)     {}\nH(X|Y)   {}\nroute    J(0): {}, J(x2): {}\n",
                    fmt17(r.nats),
                    fmt17(hx),
                    fmt17(hxy),
                    r.case_j0.name(),
                    r.case_jx2.name()
                );
                if let Some((q, d)) = oracle {
                    s += &format!("oracle   {}\ndelta    {:e} (tolerance {:e})\n", fmt17(q), d, MI_VERIFY_TOL);
                }
                s
            },
        );
        if let Some((_, d)) = oracle {
            if !(d <= MI_VERIFY_TOL) {
                return Err(Failure::consistency(anyhow!("closed form and quadrature differ by {d:e}")));
            }
        }
        Ok(())
    }

    fn deriv(&self, a: &DerivArgs) -> Outcome {
        let sigma2 = self.sigma2(a.sigma2)?;
        let power = match (a.power, a.snr_db) {
            (Some(p), _) => Some(p),
            (None, Some(db)) => Some(snr_from_db(db) * sigma2),
            _ => None,
        };
        let (analytic, fd, x2, mode) = match power {
            Some(p) => {
                let ch = ChannelParams::with_power(sigma2, p)?;
                let snr = p / ch.sigma2;
                TwoPointInput::new(a.a2, 0.0)?;
                let an = capacity_derivative(a.a2, snr)?;
                let fd = fd_checked(|t| capacity_mi(t, snr), a.a2)?;
                (an, fd, (p / a.a2).sqrt(), "capacity")
            }
            None => {
                let ch = ChannelParams::new(sigma2)?;
                let x2 = a.x2.expect("clap enforces one mode");
                let input = TwoPointInput::new(a.a2, x2)?;
                let case_cfg = self.case_config()?;
                let an = mi_derivative_a2(&input, &ch)?;
                let fd = fd_checked(
                    |t| Ok(mutual_information_with(&TwoPointInput { a2: t, x2 }, &ch, &case_cfg)?.nats),
                    a.a2,
                )?;
                (an, fd, x2, "fixed_x2")
            }
        };
        if !analytic.is_finite() {
            return Err(Failure::consistency(anyhow!("analytic derivative is not finite")));
        }
        let rel = (analytic - fd).abs() / fd.abs().max(1e-4);
        self.emit(
            "deriv",
            json!({"a2": a.a2, "x2": a.x2, "power": a.power, "snr_db": a.snr_db, "sigma2": sigma2}),
            json!({"mode": mode, "x2": x2, "analytic": analytic, "finite_difference": fd, "relative_error": rel}),
            json!({"fd_order": 5}),
            || {
                format!(
                    "mode     {mode}\nx2       {}\ndI/da2   {}\nfd       {}\nrel err  {rel:e}\n",
                    fmt17(x2),
                    fmt17(analytic),
                    fmt17(fd)
                )
            },
        );
        Ok(())
    }

    fn profile(&self, a: &ProfileArgs) -> Outcome {
        let points = self.resolve(a.points, "points", 400usize)?;
        if points == 0 {
            return Err(Failure::usage(anyhow!("--points must be at least 1")));
        }
        if !a.snr_db.is_finite() {
            return Err(Failure::usage(anyhow!("--snr-db must be finite")));
        }
        let rows = mi_profile(snr_from_db(a.snr_db), &profile_grid(points))?;
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["a2", "i_nats"]).map_err(Failure::io)?;
            for (a2, i) in &rows {
                w.write_record([fmt17(*a2), fmt17(*i)]).map_err(Failure::io)?;
            }
            w.flush().map_err(Failure::io)?;
        }
        let (best_a2, best_i) = rows.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |b, r| if r.1 > b.1 { r } else { b });
        let inputs = json!({"snr_db": a.snr_db, "points": points, "out": a.out});
        let results = json!({
            "rows": rows.iter().map(|(a2, i)| json!([a2, i])).collect::<Vec<_>>(),
            "argmax_a2": best_a2,
            "max_i_nats": best_i,
        });
        match &a.out {
            Some(path) => {
                std::fs::write(path, &buf).map_err(Failure::io)?;
                self.emit("profile", inputs, results, json!({}), || {
                    format!("wrote {} rows to {}\nmax I {} at a2 = {}\n", rows.len(), path.display(), fmt17(best_i), fmt17(best_a2))
                });
            }
            None if self.json => self.emit("profile", inputs, results, json!({}), String::new),
            None => std::io::stdout().write_all(&buf).map_err(Failure::io)?,
        }
        Ok(())
    }

    fn sweep(&self, a: &SweepArgs) -> Outcome {
        let sigma2 = self.sigma2(a.sigma2)?;
        ChannelParams::new(sigma2)?;
        if !(a.from_db.is_finite() && a.to_db.is_finite() && a.step_db.is_finite()) {
            return Err(Failure::usage(anyhow!("SNR bounds and step must be finite")));
        }
        let cfg = self.sweep_config(SweepConfig {
            snr_db_start: a.from_db,
            snr_db_stop: a.to_db,
            snr_db_step: a.step_db,
            ..SweepConfig::default()
        })?;
        let pool = thread_pool()?;
        let grid = cfg.snr_grid_db();
        let points: Vec<SweepPoint> = pool.install(|| grid.par_iter().map(|&db| sweep_point(db, sigma2, &cfg)).collect());
        let buf = sweep_csv(&points).map_err(Failure::io)?;
        let failed: Vec<String> = points
            .iter()
            .filter_map(|p| p.outcome.as_ref().err().map(|e| format!("{} dB: {e}", p.snr_db)))
            .collect();

        let inputs = json!({
            "from_db": a.from_db, "to_db": a.to_db, "step_db": a.step_db, "sigma2": sigma2, "out": a.out,
            "solver_tol": cfg.solver_tol, "grid_points_for_bracketing": cfg.grid_points_for_bracketing,
        });
        let rows: Vec<Value> = points.iter().map(sweep_json).collect();
        let diag = json!({"failures": failed});
        match &a.out {
            Some(path) => {
                std::fs::write(path, &buf).map_err(Failure::io)?;
                self.emit("sweep", inputs, json!(rows), diag, || {
                    format!("wrote {} rows to {} ({} failed)\n", points.len(), path.display(), failed.len())
                });
            }
            None if self.json => self.emit("sweep", inputs, json!(rows), diag, String::new),
            None => std::io::stdout().write_all(&buf).map_err(Failure::io)?,
        }
        if !failed.is_empty() {
            return Err(Failure::consistency(anyhow!("{} sweep point(s) failed: {}", failed.len(), failed.join("; "))));
        }
        Ok(())
    }

    fn verify(&self, a: &VerifyArgs) -> Outcome {
        let mode = if a.quick { Mode::Quick } else { Mode::Full };
        let rep = run_all(mode);
        let families: Vec<Value> = rep
            .families
            .iter()
            .map(|f| {
                json!({
                    "name": f.name, "points": f.points, "worst": f.worst, "tolerance": f.tolerance,
                    "worst_at": f.worst_at, "passed": f.passed(), "failures": f.failures,
                })
            })
            .collect();
        self.emit(
            "verify",
            json!({"quick": a.quick}),
            json!({"passed": rep.passed(), "families": families}),
            json!({}),
            || {
                let mut s = String::new();
                for f in &rep.families {
                    s += &format!(
                        "{:<18} {:>5} pts  worst {:>10.3e}  tol {:.0e}  {}\n",
                        f.name,
                        f.points,
                        f.worst,
                        f.tolerance,
                        if f.passed() { "ok" } else { "FAIL" }
                    );
                }
                for f in &rep.families {
                    for msg in &f.failures {
                        s += &format!("failure\t{}\t{}\n", f.name, msg);
                    }
                }
                s
            },
        );
        if rep.passed() {
            Ok(())
        } else {
            Err(Failure { code: 1, error: None })
        }
    }

    fn mc(&self, a: &McArgs) -> Outcome {
        let sigma2 = self.sigma2(a.sigma2)?;
        let ch = ChannelParams::new(sigma2)?;
        let input = TwoPointInput::new(a.a2, a.x2)?;
        let samples = self.resolve(a.samples, "samples", MonteCarloConfig::default().samples)?;
        if samples < 2 {
            return Err(Failure::usage(anyhow!("--samples must be at least 2")));
        }
        let est = mi_monte_carlo(&input, &ch, &MonteCarloConfig { samples, seed: a.seed });
        let closed = mutual_information_with(&input, &ch, &self.case_config()?)?.nats;
        let z = if est.std_error > 0.0 { (est.estimate - closed) / est.std_error } else { 0.0 };
        self.emit(
            "mc",
            json!({"a2": a.a2, "x2": a.x2, "sigma2": sigma2, "samples": samples, "seed": a.seed}),
            json!({"estimate": est.estimate, "std_error": est.std_error, "closed_form": closed, "z_score": z}),
            json!({}),
            || {
                format!(
                    "estimate {} nats\nstd err  {:e}\nclosed   {}\nz        {z:.3}\n",
                    fmt17(est.estimate),
                    est.std_error,
                    fmt17(closed)
                )
            },
        );
        Ok(())
    }
}

fn j_diag(e: &JEvaluation) -> Value {
    json!({
        "route": e.route.name(),
        "alpha": e.alpha,
        "beta": e.beta,
        "series_terms": e.series_terms,
        "near_singular": e.near_singular,
        "pole_guard": e.pole_guard,
    })
}

fn fd_checked(f: impl Fn(f64) -> noncoh_core::Result<f64>, x: f64) -> Result<f64, Failure> {
    let err = std::cell::RefCell::new(None);
    let d = fd_derivative(
        |t| {
            f(t).unwrap_or_else(|e| {
                *err.borrow_mut() = Some(e);
                f64::NAN
            })
        },
        x,
        FdOrder::Central5,
    );
    match err.into_inner() {
        Some(e) => Err(e.into()),
        None => Ok(d),
    }
}

/// Pool sized by NONCOH_THREADS, or all cores when unset.
fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var("NONCOH_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(Failure::usage(anyhow!("NONCOH_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(Failure::io)
}

pub fn sweep_csv(points: &[SweepPoint]) -> csv::Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(SWEEP_HEADER)?;
        for p in points {
            let snr = snr_from_db(p.snr_db);
            match &p.outcome {
                Ok(c) => w.write_record([
                    fmt17(p.snr_db),
                    fmt17(c.snr_linear),
                    fmt17(c.a2_star),
                    fmt17(c.x2_star),
                    fmt17(c.i_star_nats),
                    c.regime.name().to_string(),
                    c.roots_found.to_string(),
                    fmt17(c.solver_residual),
                ])?,
                Err(_) => w.write_record([
                    fmt17(p.snr_db),
                    fmt17(snr),
                    String::new(),
                    String::new(),
                    String::new(),
                    "FAILED".to_string(),
                    String::new(),
                    String::new(),
                ])?,
            }
        }
        w.flush()?;
    }
    Ok(buf)
}

fn sweep_json(p: &SweepPoint) -> Value {
    match &p.outcome {
        Ok(c) => json!({
            "snr_db": p.snr_db, "snr_linear": c.snr_linear, "a2_star": c.a2_star, "x2_star": c.x2_star,
            "i_star_nats": c.i_star_nats, "regime": c.regime.name(), "roots_found": c.roots_found,
            "solver_residual": c.solver_residual, "golden_fallback": c.golden_fallback,
        }),
        Err(e) => json!({"snr_db": p.snr_db, "regime": "FAILED", "error": e.to_string()}),
    }
}
