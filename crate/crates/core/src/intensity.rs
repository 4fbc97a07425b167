//! Intensity-difference detection after the second 50:50 beam splitter.
//!
//! The splitter maps coherent pairs to coherent pairs,
//! `(β₁, β₂) → ((β₁ + iβ₂)/√2, (iβ₁ + β₂)/√2)`, so every moment of
//! `S_z = (n_a − n_b)/2` reduces to sums over pairs of coherent branches.
//! For output labels `(u_a, v_a)`, `(u_b, v_b)` with `p = ū_b u_a`,
//! `q = v̄_b v_a` and overlap `O = ⟨b|a⟩`:
//!
//! ```text
//! ⟨b|S_z|a⟩  = O (p − q)/2
//! ⟨b|S_z²|a⟩ = O [(p + q) + (p − q)²]/4
//! ```
//!
//! In terms of the pre-splitter labels, `p − q = i(β̄₁ᵇβ₂ᵃ − β̄₂ᵇβ₁ᵃ)` and
//! `p + q = β̄₁ᵇβ₁ᵃ + β̄₂ᵇβ₂ᵃ`; the mode-2 labels carry `e^{iφ}`, which gives
//! the phase derivative directly.

use num_complex::Complex64;

use crate::ecs::{coherent_overlap, EcsParams};
use crate::error::{Error, Result};
use crate::loss::{apply_loss, qfi_lossy, spectral_decomposition, LossChannel};

/// Slopes smaller than this make the error-propagation estimate degenerate.
pub const SLOPE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzStatistics {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    /// `∂⟨S_z⟩/∂φ`
    pub slope: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSensitivity {
    /// Error-propagation phase uncertainty; infinite when degenerate.
    pub delta_phi: f64,
    pub phi: f64,
    /// Cramér–Rao bound `1/√F_Q` of the same state.
    pub crb: f64,
    /// The signal slope vanished at this phase.
    pub degenerate: bool,
}

/// Matrix elements of `S_z`, `S_z²` and `∂_φ S_z` between two branches.
struct PairMoments {
    sz: Complex64,
    sz2: Complex64,
    dsz: Complex64,
}

fn pair_moments(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> PairMoments {
    let i = Complex64::new(0.0, 1.0);
    let (a1, a2) = a;
    let (b1, b2) = b;
    let overlap = coherent_overlap(b1, a1) * coherent_overlap(b2, a2);
    let diff = i * (b1.conj() * a2 - b2.conj() * a1);
    let sum = b1.conj() * a1 + b2.conj() * a2;
    // a₂ → a₂e^{iφ}, b̄₂ → b̄₂e^{−iφ}; the overlap is phase-independent
    let ddiff = -(b1.conj() * a2 + b2.conj() * a1);
    PairMoments {
        sz: overlap * diff * 0.5,
        sz2: overlap * (sum + diff * diff) * 0.25,
        dsz: overlap * ddiff * 0.5,
    }
}

/// Moments of `S_z` in the output state of the interferometer.
///
/// Expectations are taken in the spectral form `Σ± λ± ⟨λ±|·|λ±⟩` with
/// `|λ±⟩ = M±(η±|φ₁⟩ + |φ₂⟩)`.
pub fn sz_statistics(params: &EcsParams, channel: &LossChannel, phi: f64) -> SzStatistics {
    let state = apply_loss(params, channel, phi);
    let spec = spectral_decomposition(&state);
    let branches = [(state.mode1, state.mode2), (-state.mode1, -state.mode2)];

    let mut pairs: [[Option<PairMoments>; 2]; 2] = Default::default();
    for (a, row) in pairs.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = Some(pair_moments(branches[a], branches[b]));
        }
    }

    let mut mean = 0.0;
    let mut second = 0.0;
    let mut slope = 0.0;
    for (lambda, m, eta) in [
        (spec.lambda_plus, spec.m_plus, spec.eta_plus),
        (spec.lambda_minus, spec.m_minus, spec.eta_minus),
    ] {
        if lambda == 0.0 {
            continue;
        }
        let coeffs = [eta, 1.0];
        let w = lambda * m * m;
        let (mut sz, mut sz2, mut dsz) = (
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
        );
        for a in 0..2 {
            for b in 0..2 {
                let pm = pairs[a][b].as_ref().expect("filled above");
                let c = coeffs[a] * coeffs[b];
                sz += pm.sz * c;
                sz2 += pm.sz2 * c;
                dsz += pm.dsz * c;
            }
        }
        mean += w * sz.re;
        second += w * sz2.re;
        slope += w * dsz.re;
    }

    SzStatistics {
        mean,
        second_moment: second,
        variance: second - mean * mean,
        slope,
        phi,
    }
}

fn sensitivity_from(stats: &SzStatistics, crb: f64) -> PhaseSensitivity {
    if stats.slope.abs() < SLOPE_FLOOR {
        return PhaseSensitivity {
            delta_phi: f64::INFINITY,
            phi: stats.phi,
            crb,
            degenerate: true,
        };
    }
    PhaseSensitivity {
        delta_phi: stats.variance.max(0.0).sqrt() / stats.slope.abs(),
        phi: stats.phi,
        crb,
        degenerate: false,
    }
}

/// Error-propagation phase uncertainty `ΔS_z / |∂⟨S_z⟩/∂φ|`.
pub fn phase_error(params: &EcsParams, channel: &LossChannel, phi: f64) -> PhaseSensitivity {
    let crb = qfi_lossy(params, channel).delta_phi_min;
    sensitivity_from(&sz_statistics(params, channel, phi), crb)
}

/// Grid point with the smallest `delta_phi`; ties go to the smaller phase.
pub fn optimal_phase_error(
    params: &EcsParams,
    channel: &LossChannel,
    grid: &[f64],
) -> Result<PhaseSensitivity> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let crb = qfi_lossy(params, channel).delta_phi_min;
    let mut best: Option<PhaseSensitivity> = None;
    for &phi in grid {
        let cand = sensitivity_from(&sz_statistics(params, channel, phi), crb);
        if cand.degenerate {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                cand.delta_phi < b.delta_phi || (cand.delta_phi == b.delta_phi && cand.phi < b.phi)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    best.ok_or(Error::AllDegenerate)
}

/// `n` phases evenly spaced strictly inside `(lo, hi)`.
pub fn open_phase_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n + 1) as f64;
    (1..=n).map(|j| lo + step * j as f64).collect()
}
