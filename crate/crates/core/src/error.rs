use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the supported domain: {0}")]
    Domain(&'static str),
    #[error("series diverges for |z| = {0}")]
    Divergence(f64),
    #[error("series did not reach tolerance after {terms} terms (bound {bound:e})")]
    NoConvergence { terms: u64, bound: f64 },
    #[error("pole of the function at x = {0}")]
    Pole(f64),
    #[error("degenerate input: the mutual information is zero")]
    DegenerateInput,
    #[error("closed form called outside its case")]
    CaseMismatch,
    #[error("alpha = {0} lies too close to a reciprocal integer for this closed form")]
    NearSingularAlpha(f64),
    #[error("channel has no power budget")]
    MissingPowerBudget,
    #[error("quadrature stopped at {subdivisions} subdivisions with error {error:e}")]
    ToleranceNotMet { subdivisions: usize, error: f64 },
    #[error("capacity solver failed at SNR = {0}")]
    SolverFailure(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("internal consistency check failed: {0}")]
    Consistency(&'static str),
}
