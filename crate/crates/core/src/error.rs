use thiserror::Error;

/// Errors raised by the solver, the diagnostics and the runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative power |D|^{power} applied to a field with nonzero mean ({mean:e})")]
    NegativePowerOnMean { power: f64, mean: f64 },

    #[error("dyadic block 2^{index} lies outside the resolvable band [{lo:e}, {hi:e}]")]
    OutOfBand { index: i32, lo: f64, hi: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("degenerate conformal map: min J = {min_j:e} at t = {t}")]
    DegenerateJacobian { min_j: f64, t: f64 },

    #[error("time step {dt} violates the stability bound dt * max omega < {bound} (max omega = {max_omega})")]
    StabilityViolation { dt: f64, max_omega: f64, bound: f64 },

    #[error("snapshots are not equally spaced in time: {0:?}")]
    InconsistentTimes([f64; 3]),

    #[error("unknown cubic term `{0}`")]
    UnknownTerm(String),

    #[error("time {0} is below 1, localization thresholds collapse")]
    TimeTooSmall(f64),

    #[error("need at least {needed} samples spanning a decade, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("velocity {v} at time {t} is outside the admissible domain")]
    OutOfDomain { t: f64, v: f64 },

    #[error("packet at velocity {v}, time {t} wraps around the periodic domain")]
    WrapAround { t: f64, v: f64 },

    #[error("{0}")]
    Usage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error("run failed at t = {t} (last good state in {dump}): {source}")]
    RunFailed { t: f64, dump: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
