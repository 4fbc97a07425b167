//! Phase-estimation precision of two-mode entangled coherent states
//! `N(|α⟩|kα⟩ + |−α⟩|−kα⟩)` in a Mach–Zehnder interferometer.
//!
//! Closed forms for the photon statistics, the pure- and mixed-state quantum
//! Fisher information under symmetric arm loss, and the intensity-difference
//! phase sensitivity, each paired with an independent truncated Fock-space
//! evaluation in [`fock`].

pub mod ecs;
pub mod error;
pub mod fock;
pub mod intensity;
pub mod linalg;
pub mod loss;
pub mod lossless;

pub use ecs::{
    amplitude_for_mean_photon, coherent_overlap, normalization, photon_statistics, EcsParams,
    PhotonStatistics,
};
pub use error::{Error, Result};
pub use intensity::{
    open_phase_grid, optimal_phase_error, phase_error, sz_statistics, PhaseSensitivity,
    SzStatistics,
};
pub use loss::{
    apply_loss, qfi_lossy, qfi_lossy_at_mean_photon, spectral_decomposition, LossChannel,
    LossyTerms, ReducedState, SpectralDecomposition,
};
pub use lossless::{asymptotic_bound, qfi_at_mean_photon, qfi_pure, QfiReport};
pub use num_complex::Complex64;
