use thiserror::Error;

/// Errors raised while constructing states, channels, or evaluating sensitivities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("asymmetry ratio k must be a finite nonzero real number (got {0})")]
    InvalidAsymmetry(f64),

    #[error("coherent amplitude must be finite (got {0})")]
    NonFiniteAmplitude(num_complex::Complex64),

    #[error("mean photon number must be finite and non-negative (got {0})")]
    InvalidMeanPhoton(f64),

    #[error("transmission must lie in [0, 1] (got {0})")]
    InvalidTransmission(f64),

    #[error("phase grid is empty")]
    EmptyGrid,

    #[error("every phase grid point has a vanishing signal slope")]
    AllDegenerate,

    #[error("Fock cutoff must be at least 1 (got {0})")]
    InvalidCutoff(usize),

    #[error("dense materialization of dimension {0} exceeds the limit of {1}")]
    TooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
