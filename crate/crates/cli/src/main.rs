#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Mutual information and two-point capacity of the noncoherent Rayleigh
/// fading channel.
#[derive(Parser, Debug)]
#[command(name = "noncoh", version)]
pub struct Cli {
    /// Emit a JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// key=value file overriding built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// I(X;Y) for one two-point input.
    Mi(MiArgs),
    /// Analytic dI/da2 against a finite difference.
    Deriv(DerivArgs),
    /// I along a2 at fixed SNR, as CSV.
    Profile(ProfileArgs),
    /// Optimal two-point input over an SNR grid, as CSV.
    Sweep(SweepArgs),
    /// Closed forms against oracles and identities.
    Verify(VerifyArgs),
    /// Monte-Carlo estimate of I(X;Y).
    Mc(McArgs),
}

#[derive(Args, Debug)]
pub struct MiArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
    /// Also integrate numerically and fail if the two disagree by more than 1e-7.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["x2", "power", "snr_db"]))]
pub struct DerivArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a2: f64,
    /// Fixed second mass point.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Option<f64>,
    /// Power budget; x2 = sqrt(P/a2).
    #[arg(long, allow_hyphen_values = true)]
    pub power: Option<f64>,
    /// SNR in dB; x2 = sqrt(SNR sigma2/a2).
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    /// Number of interior a2 values [default: 400].
    #[arg(long)]
    pub points: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub from_db: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to_db: f64,
    #[arg(long)]
    pub step_db: f64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Reduced grids.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
    /// [default: 10000000]
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(err) = &f.error {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(f.code)
        }
    }
}
