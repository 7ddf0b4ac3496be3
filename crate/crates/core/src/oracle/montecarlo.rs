use super::{log_sum_exp, mixture_logs};
use crate::channel::{ChannelParams, TwoPointInput};
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self { samples: 10_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Sample mean of log f(Y|X) − log f_Y(Y) with X from the two-point law and
/// Y = √(−(X²+σ²) ln U).
pub fn mi_monte_carlo(input: &TwoPointInput, ch: &ChannelParams, cfg: &MonteCarloConfig) -> MonteCarloEstimate {
    let (l1, l2, s, c) = mixture_logs(input, ch);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.samples.max(1);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..n {
        let pick_x2 = rng.random::<f64>() < input.a2;
        let var = if pick_x2 { c } else { s };
        let u = 1.0 - rng.random::<f64>();
        let y2 = -var * u.ln();
        // The common factor 2y cancels between numerator and mixture.
        let num = -var.ln() - y2 / var;
        let den = log_sum_exp(l1 - y2 / s, l2 - y2 / c);
        let sample = num - den;
        let delta = sample - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (sample - mean);
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    MonteCarloEstimate { estimate: mean, std_error: (var / n as f64).sqrt() }
}
