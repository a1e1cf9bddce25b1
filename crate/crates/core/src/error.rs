use thiserror::Error;

pub type Result<T> = std::result::Result<T, QevoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QevoError {
    #[error("invalid dimension {0}: need d >= 2")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate spectrum: closed-form denominator {denominator:.3e} below threshold")]
    DegenerateSpectrum { denominator: f64 },

    #[error("invalid Hamiltonian specification: {0}")]
    InvalidSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("state is not normalized (norm defect {0:.3e})")]
    NotNormalized(f64),

    #[error("azimuth undefined at t = {t}: field on the polar axis or vanishing")]
    IllDefinedAzimuth { t: f64 },

    #[error("degenerate class: Omega_b vanishes at t = {t}")]
    DegenerateClass { t: f64 },

    #[error("n-flow chart singularity at t = {t}: |n| = {norm}")]
    ChartSingularity { t: f64, norm: f64 },

    #[error("direction of n undefined: u0 = -1 with vanishing vector part")]
    DirectionUndefined,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl QevoError {
    /// True for errors caused by the caller's arguments rather than by the
    /// numerics (used by the CLI to pick an exit code).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            QevoError::Precondition(_)
                | QevoError::NotNormalized(_)
                | QevoError::IllDefinedAzimuth { .. }
                | QevoError::DegenerateClass { .. }
                | QevoError::DirectionUndefined
        )
    }
}
