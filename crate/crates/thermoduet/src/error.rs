use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("frequency sampling for subsystem {subsystem} exceeded {retries} redraws of a non-positive value")]
    SamplingExhausted { subsystem: u8, retries: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("symmetric eigensolver did not converge")]
    EigenNoConvergence,

    #[error("spectral decomposition residual {residual:e} exceeds tolerance {tolerance:e}")]
    SpectralResidual { residual: f64, tolerance: f64 },

    #[error("thermal state undefined for non-positive mode energy {energy} in subsystem {subsystem}")]
    NonPositiveModeEnergy { subsystem: u8, energy: f64 },

    #[error("singular propagator at t = {t}: condition estimate {condition:e}")]
    SingularPropagator { t: f64, condition: f64 },

    #[error("Fock space dimension {dim} exceeds the cap {cap}")]
    FockDimension { dim: usize, cap: usize },

    #[error("t = {t} lies inside the guard band around a singular time")]
    GuardBand { t: f64 },

    #[error("invalid time grid: {0}")]
    Grid(String),
}

impl Error {
    /// True for failures caused by the physical parameters rather than by the caller's input shape.
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::NonPositiveModeEnergy { .. }
                | Error::SingularPropagator { .. }
                | Error::EigenNoConvergence
                | Error::SpectralResidual { .. }
                | Error::SamplingExhausted { .. }
        )
    }
}
