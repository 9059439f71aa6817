use thiserror::Error;

/// Why a shooting trajectory stopped before reaching its target event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitReason {
    /// `φ` reached the `x`-axis (`φ → 0`).
    AxisX,
    /// `φ` reached the `y`-axis (`φ → π/2`).
    AxisY,
    /// The step size collapsed (the right-hand side became singular).
    Singular,
    /// The time horizon ran out.
    Horizon,
}

impl core::fmt::Display for ExitReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            ExitReason::AxisX => "left the orbit space through the x-axis",
            ExitReason::AxisY => "left the orbit space through the y-axis",
            ExitReason::Singular => "step size collapsed at a singularity",
            ExitReason::Horizon => "time horizon exhausted",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("step size underflow at t = {t} (h = {h})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("horizon t = {t} reached without a terminal event")]
    HorizonReached { t: f64 },
    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    NoSignChange { a: f64, fa: f64, b: f64, fb: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error("{what} = {value} is outside its domain")]
    DomainError { what: &'static str, value: f64 },
    #[error("singular configuration: {0}")]
    SingularConfiguration(&'static str),
    #[error("axis regularization diverged: checkpoint moved by {change}")]
    RegularizationDiverged { change: f64 },
    #[error("(m, n) = ({m}, {n}) is in the wrong regime for this construction (m + n = {})", m + n)]
    WrongRegime { m: u32, n: u32 },
    #[error("only {found} of {wanted} crossings found before the horizon")]
    CrossingNotFound { wanted: usize, found: usize },
    #[error("no trajectory nodes in the radius window")]
    EmptyWindow,
    #[error("stopping event not found: trajectory {0}")]
    EventNotFound(ExitReason),
    #[error("no sign change of the shooting function on the scan grid")]
    BracketNotFound,
    #[error("profile domain exceeded: {requested} is beyond the window {limit}")]
    DomainExceeded { requested: f64, limit: f64 },
    #[error("integral diverges: the n = 2 profile is defined for all heights")]
    Unbounded,
    #[error("tangency root not bracketed on [0, {t_max}]")]
    RootNotBracketed { t_max: f64 },
    #[error("ambient dimension {dim} is unsupported here")]
    DimensionUnsupported { dim: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
