use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("matrix must be non-empty")]
    EmptyMatrix,

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace deviates from one by {0:e}")]
    InvalidTrace(f64),

    #[error("negative eigenvalue {0:e} below tolerance")]
    NegativeEigenvalue(f64),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("subsystem label `{0}` appears in both parts")]
    OverlappingLabels(String),

    #[error("label selection must be non-empty")]
    EmptySelection,

    #[error("subsystem dimension must be positive (label `{0}`)")]
    ZeroDimension(String),

    #[error("total Hilbert-space dimension {0} exceeds the supported maximum of {max}", max = crate::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("states live on different tensor spaces")]
    SpaceMismatch,

    #[error("`{0}` must be finite")]
    NonFinite(&'static str),

    #[error("mutual information {0:e} is negative beyond round-off")]
    NegativeMutualInformation(f64),

    #[error("system entropy {0:e} too small for a rescaled mutual information")]
    UndefinedRatio(f64),

    #[error("invalid configuration: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("time-dependent rate evaluated within the pole window at t = {0}")]
    PoleProximity(f64),

    #[error("trace drifted by {drift:e} at t = {t}; reduce the step size")]
    TraceDrift { t: f64, drift: f64 },

    #[error("state invariant violated at t = {t}: {source}")]
    Invariant { t: f64, source: Box<Error> },

    #[error("integrated state departs from the closed form by {error:e} at t = {t}")]
    ClosedFormMismatch { t: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig { field, reason: reason.into() }
    }

    /// True for failures that indicate the numerical state became unphysical.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian(_)
                | Error::InvalidTrace(_)
                | Error::NegativeEigenvalue(_)
                | Error::NegativeMutualInformation(_)
                | Error::TraceDrift { .. }
                | Error::Invariant { .. }
                | Error::ClosedFormMismatch { .. }
                | Error::PoleProximity(_)
        )
    }
}
