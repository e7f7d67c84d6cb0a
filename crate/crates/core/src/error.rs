use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionOverflow { dim: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported cluster: {0}")]
    UnsupportedCluster(String),
    #[error("empty spectrum")]
    EmptySpectrum,
    #[error("spectrum carries no total-spin labels")]
    MissingSpinLabels,
    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid bracket [{lo}, {hi}]: no sign change")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("no entanglement gap (E_sep - E_g = {gap:e})")]
    NoEntanglementGap { gap: f64 },
    #[error("susceptibility witness never fires below {t_max} K")]
    NoWitnessDetection { t_max: f64 },
    #[error("pair ({0}, {1}) is never entangled")]
    NeverEntangled(usize, usize),
    #[error("integer overflow in multiplicity sum")]
    Overflow,
    #[error("at {point}: {source}")]
    AtGridPoint { point: String, source: Box<Error> },
}

impl Error {
    /// Tags an error with the grid point where it occurred.
    pub fn at(self, point: impl Into<String>) -> Self {
        Error::AtGridPoint {
            point: point.into(),
            source: Box::new(self),
        }
    }

    /// The error with any grid-point tags removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtGridPoint { source, .. } => source.root_cause(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
