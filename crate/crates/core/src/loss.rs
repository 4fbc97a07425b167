//! Photon loss in both interferometer arms.
//!
//! Each arm leaks into a vacuum environment mode through a beam splitter of
//! transmission `T`. Tracing out the environment leaves the sensor modes in
//!
//! ```text
//! ρ = N² { |φ₁⟩⟨φ₁| + |φ₂⟩⟨φ₂| + c (|φ₁⟩⟨φ₂| + |φ₂⟩⟨φ₁|) }
//! ```
//!
//! with `|φ₁,₂⟩ = |±√T α⟩|±√T kα e^{iφ}⟩`, `⟨φ₁|φ₂⟩ = s = e^{−2Tx}` and
//! environment coherence `c = e^{−2Rx}`. Both the coefficient matrix and the
//! Gram matrix of the branches are symmetric 2×2 circulants, so the
//! eigenvectors are the symmetric and antisymmetric branch combinations and
//! `λ± = N²(1 ± s)(1 ± c)`.

use num_complex::Complex64;

use crate::ecs::{
    amplitude_for_mean_photon, exp_flushed, normalization, one_minus_exp_neg, photon_statistics,
    EcsParams,
};
use crate::error::{Error, Result};
use crate::lossless::QfiReport;

/// Identical loss beam splitters in both arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    transmission: f64,
}

impl LossChannel {
    pub fn from_transmission(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidTransmission(t));
        }
        Ok(Self { transmission: t })
    }

    pub fn from_loss(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidTransmission(1.0 - r));
        }
        Ok(Self {
            transmission: 1.0 - r,
        })
    }

    /// Channel of a beam splitter with mixing angle `γ`, `T = cos²(γ/2)`.
    pub fn from_mixing_angle(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidTransmission(f64::NAN));
        }
        let c = (0.5 * gamma).cos();
        Self::from_transmission((c * c).clamp(0.0, 1.0))
    }

    pub fn lossless() -> Self {
        Self { transmission: 1.0 }
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn loss(&self) -> f64 {
        1.0 - self.transmission
    }

    /// Mixing angle in `[0, π]`.
    pub fn mixing_angle(&self) -> f64 {
        2.0 * self.transmission.sqrt().acos()
    }
}

/// Sensor-mode state after loss and phase accumulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub params: EcsParams,
    pub channel: LossChannel,
    pub phi: f64,
    /// Mode-1 amplitude of the first branch, `√T α`; the second branch is its negative.
    pub mode1: Complex64,
    /// Mode-2 amplitude of the first branch, `√T kα e^{iφ}`.
    pub mode2: Complex64,
    /// Sensor-branch overlap `s = e^{−2Tx}`.
    pub sensor_overlap: f64,
    /// Environment coherence `c = e^{−2Rx}`.
    pub coherence: f64,
    /// Input normalization `N`.
    pub normalization: f64,
}

impl ReducedState {
    /// `1 − s`, accurate for small intensities.
    fn one_minus_s(&self) -> f64 {
        one_minus_exp_neg(2.0 * self.channel.transmission() * self.params.intensity())
    }

    /// `1 − c`, accurate for small intensities.
    fn one_minus_c(&self) -> f64 {
        one_minus_exp_neg(2.0 * self.channel.loss() * self.params.intensity())
    }

    /// Mean photon number in mode 2 for a single coherent branch, `T k² |α|²`.
    pub fn branch_mode2_intensity(&self) -> f64 {
        self.mode2.norm_sqr()
    }
}

/// Sends the input state through the loss channel and the phase shifter.
pub fn apply_loss(params: &EcsParams, channel: &LossChannel, phi: f64) -> ReducedState {
    let t = channel.transmission();
    let x = params.intensity();
    let sqrt_t = t.sqrt();
    let alpha = params.alpha();
    ReducedState {
        params: *params,
        channel: *channel,
        phi,
        mode1: alpha * sqrt_t,
        mode2: alpha * (sqrt_t * params.k()) * Complex64::from_polar(1.0, phi),
        sensor_overlap: exp_flushed(-2.0 * t * x),
        coherence: exp_flushed(-2.0 * channel.loss() * x),
        normalization: normalization(params),
    }
}

/// Eigen-structure of the reduced state.
///
/// The eigenvectors are `M±(η± |φ₁⟩ + |φ₂⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDecomposition {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    /// `[2(1 + s)]^{−1/2}`
    pub m_plus: f64,
    /// `[2(1 − s)]^{−1/2}`; infinite when the branches coincide (`s = 1`).
    pub m_minus: f64,
    /// `λ₊ − λ₋`
    pub gap: f64,
}

impl SpectralDecomposition {
    /// `λ₋ = 0`: the state is pure.
    pub fn is_degenerate(&self) -> bool {
        self.lambda_minus == 0.0
    }

    pub fn purity(&self) -> f64 {
        self.lambda_plus * self.lambda_plus + self.lambda_minus * self.lambda_minus
    }
}

pub fn spectral_decomposition(state: &ReducedState) -> SpectralDecomposition {
    let n2 = state.normalization * state.normalization;
    let s = state.sensor_overlap;
    let c = state.coherence;
    let lambda_plus = n2 * (1.0 + s) * (1.0 + c);
    let lambda_minus = n2 * state.one_minus_s() * state.one_minus_c();
    let m_minus = {
        let d = 2.0 * state.one_minus_s();
        if d > 0.0 {
            d.powf(-0.5)
        } else {
            f64::INFINITY
        }
    };
    SpectralDecomposition {
        lambda_plus,
        lambda_minus,
        eta_plus: 1.0,
        eta_minus: -1.0,
        m_plus: (2.0 * (1.0 + s)).powf(-0.5),
        m_minus,
        gap: lambda_plus - lambda_minus,
    }
}

/// Contributions to the mixed-state QFI.
///
/// `qfi = (q1_plus − q2_plus) + (q1_minus − q2_minus) − (q3_plus + q3_minus)`, with
/// `q1 = 4λ⟨λ′|λ′⟩`, `q2 = 4λ|⟨λ′|λ⟩|²` and the cross terms
/// `q3± = 8λ₊λ₋/(λ₊+λ₋) |⟨λ±′|λ∓⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyTerms {
    pub q1_plus: f64,
    pub q1_minus: f64,
    pub q2_plus: f64,
    pub q2_minus: f64,
    pub q3_plus: f64,
    pub q3_minus: f64,
    pub spectrum: SpectralDecomposition,
}

impl LossyTerms {
    pub fn total(&self) -> f64 {
        (self.q1_plus - self.q2_plus) + (self.q1_minus - self.q2_minus)
            - (self.q3_plus + self.q3_minus)
    }
}

/// `⟨λ|n₂|λ⟩` and `⟨λ|n₂²|λ⟩` for `M(η|φ₁⟩ + |φ₂⟩)`, `m = T k²|α|²`.
///
/// Expanded over the four branch pairs; off-diagonal pairs pick up the factor
/// `−m s` (first moment) and `(m² − m) s` (second moment).
fn eigvec_mode2_moments(m_norm: f64, eta: f64, m: f64, s: f64) -> (f64, f64) {
    let mm = m_norm * m_norm;
    let first = mm * m * ((1.0 + eta * eta) - 2.0 * eta * s);
    let second = mm * m * ((1.0 + eta * eta) * (1.0 + m) - 2.0 * eta * (1.0 - m) * s);
    (first, second)
}

/// `⟨λ₊|n₂|λ₋⟩`
fn eigvec_cross_mode2(spec: &SpectralDecomposition, m: f64, s: f64) -> f64 {
    let (ep, em) = (spec.eta_plus, spec.eta_minus);
    spec.m_plus * spec.m_minus * m * ((1.0 + ep * em) - s * (ep + em))
}

/// Evaluates the closed-form QFI terms for a reduced state.
pub fn lossy_terms(state: &ReducedState) -> LossyTerms {
    let spec = spectral_decomposition(state);
    let s = state.sensor_overlap;
    let m = state.branch_mode2_intensity();

    let (mut q1_plus, mut q2_plus) = (0.0, 0.0);
    if spec.lambda_plus > 0.0 {
        let (first, second) = eigvec_mode2_moments(spec.m_plus, spec.eta_plus, m, s);
        q1_plus = 4.0 * spec.lambda_plus * second;
        q2_plus = 4.0 * spec.lambda_plus * first * first;
    }

    let (mut q1_minus, mut q2_minus, mut q3_plus, mut q3_minus) = (0.0, 0.0, 0.0, 0.0);
    if !spec.is_degenerate() {
        // λ₋ > 0 implies s < 1, so M₋ is finite here.
        let (first, second) = eigvec_mode2_moments(spec.m_minus, spec.eta_minus, m, s);
        q1_minus = 4.0 * spec.lambda_minus * second;
        q2_minus = 4.0 * spec.lambda_minus * first * first;

        let lam_sum = spec.lambda_plus + spec.lambda_minus;
        let weight = 8.0 * spec.lambda_plus * spec.lambda_minus / lam_sum;
        // n₂ is Hermitian and the overlaps are real, so both cross terms coincide.
        let cross = eigvec_cross_mode2(&spec, m, s);
        q3_plus = weight * cross * cross;
        q3_minus = weight * cross * cross;
    }

    LossyTerms {
        q1_plus,
        q1_minus,
        q2_plus,
        q2_minus,
        q3_plus,
        q3_minus,
        spectrum: spec,
    }
}

/// Mixed-state QFI of the lossy sensor state.
///
/// The spectrum does not depend on `φ`, so any phase gives the same value.
/// A fully lossy channel (`T = 0`) leaves the vacuum and returns zero.
pub fn qfi_lossy(params: &EcsParams, channel: &LossChannel) -> QfiReport {
    let n_bar = photon_statistics(params).n_total;
    if channel.transmission() == 0.0 {
        return QfiReport::new(0.0, n_bar, None);
    }
    let state = apply_loss(params, channel, 0.0);
    let terms = lossy_terms(&state);
    // F_Q ≥ 0 analytically; clamp rounding noise at the vacuum.
    QfiReport::new(terms.total().max(0.0), n_bar, Some(terms))
}

/// Lossy QFI at a prescribed lossless input mean photon number.
pub fn qfi_lossy_at_mean_photon(n_bar: f64, k: f64, loss: f64) -> Result<QfiReport> {
    let channel = LossChannel::from_loss(loss)?;
    let a = amplitude_for_mean_photon(n_bar, k)?;
    let params = EcsParams::real(a, k)?;
    let mut report = qfi_lossy(&params, &channel);
    report.n_bar = n_bar;
    report.sql_qfi = n_bar;
    report.heisenberg_qfi = n_bar * n_bar;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lossless::{qfi_at_mean_photon, qfi_pure};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(a: f64, k: f64) -> EcsParams {
        EcsParams::real(a, k).unwrap()
    }

    #[test]
    fn channel_validation() {
        assert!(LossChannel::from_transmission(1.2).is_err());
        assert!(LossChannel::from_loss(-0.1).is_err());
        let ch = LossChannel::from_loss(0.3).unwrap();
        assert_eq!(ch.transmission() + ch.loss(), 1.0);
        let back = LossChannel::from_mixing_angle(ch.mixing_angle()).unwrap();
        assert_relative_eq!(back.transmission(), 0.7, epsilon = 1e-15);
        assert_eq!(
            LossChannel::from_mixing_angle(0.0).unwrap().transmission(),
            1.0
        );
    }

    #[test]
    fn no_loss_keeps_the_state_pure() {
        let p = params(0.8, 2.0);
        let st = apply_loss(&p, &LossChannel::lossless(), 0.4);
        assert_eq!(st.coherence, 1.0);
        assert_relative_eq!(st.sensor_overlap, p.branch_overlap(), epsilon = 1e-16);
        let sp = spectral_decomposition(&st);
        assert_eq!(sp.lambda_minus, 0.0);
        assert_relative_eq!(sp.lambda_plus, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn total_loss_leaves_vacuum() {
        let st = apply_loss(
            &params(1.3, 2.0),
            &LossChannel::from_transmission(0.0).unwrap(),
            0.2,
        );
        assert_eq!(st.mode1, Complex64::new(0.0, 0.0));
        assert_eq!(st.mode2, Complex64::new(0.0, 0.0));
        assert_eq!(st.sensor_overlap, 1.0);
        let sp = spectral_decomposition(&st);
        assert_relative_eq!(sp.lambda_plus, 1.0, epsilon = 1e-15);
        assert_eq!(sp.lambda_minus, 0.0);
        let r = qfi_lossy(
            &params(1.3, 2.0),
            &LossChannel::from_transmission(0.0).unwrap(),
        );
        assert_eq!(r.qfi, 0.0);
    }

    #[test]
    fn half_transmission_overlaps() {
        let st = apply_loss(
            &params(1.0, 1.0),
            &LossChannel::from_loss(0.5).unwrap(),
            0.0,
        );
        let e2 = (-2.0f64).exp();
        assert_relative_eq!(st.sensor_overlap, e2, epsilon = 1e-16);
        assert_relative_eq!(st.coherence, e2, epsilon = 1e-16);
        assert_relative_eq!(
            st.sensor_overlap * st.coherence,
            (-4.0f64).exp(),
            epsilon = 1e-16
        );
    }

    #[test]
    fn eigenvalues_for_reference_point() {
        // α = 1, k = 2, R = 0.3
        let st = apply_loss(
            &params(1.0, 2.0),
            &LossChannel::from_loss(0.3).unwrap(),
            0.4,
        );
        let sp = spectral_decomposition(&st);
        assert_relative_eq!(sp.lambda_plus, 0.525_348_324_354_563_9, epsilon = 1e-14);
        assert_relative_eq!(sp.lambda_minus, 0.474_651_675_645_436_1, epsilon = 1e-14);
        assert_relative_eq!(sp.gap, sp.lambda_plus - sp.lambda_minus);
    }

    #[test]
    fn cross_terms_vanish_for_parity_eigenvectors() {
        let r = qfi_lossy(&params(1.0, 3.0), &LossChannel::from_loss(0.4).unwrap());
        let t = r.terms.unwrap();
        assert_eq!(t.q3_plus, 0.0);
        assert_eq!(t.q3_minus, 0.0);
        assert_relative_eq!(t.total(), r.qfi);
    }

    #[test]
    fn reference_values() {
        let r = qfi_lossy_at_mean_photon(1.0, 2.0, 0.3).unwrap();
        assert_relative_eq!(r.qfi, 2.624_168_247_957_518, max_relative = 1e-11);
        let r = qfi_lossy_at_mean_photon(3.0, 2.0, 0.3).unwrap();
        assert_relative_eq!(r.qfi, 6.819_729_100_616_322, max_relative = 1e-11);
        let r = qfi_lossy_at_mean_photon(2.0, 5.0, 0.6).unwrap();
        assert_relative_eq!(r.qfi, 2.863_975_946_037_152, max_relative = 1e-11);
        assert!(r.beats_sql());
        let r = qfi_lossy(&params(1.0, 5.0), &LossChannel::from_loss(0.6).unwrap());
        assert_relative_eq!(r.qfi, 40.0, max_relative = 1e-12);
    }

    #[test]
    fn symmetric_state_hits_sql_at_half_loss() {
        for n in [1.0, 2.0, 3.0, 4.0, 5.0] {
            let r = qfi_lossy_at_mean_photon(n, 1.0, 0.5).unwrap();
            assert_relative_eq!(r.qfi, n, max_relative = 1e-12);
        }
    }

    #[test]
    fn lossless_limit_matches_mean_photon_entry() {
        for k in [1.0, 2.0, 10.0] {
            for n in [0.0, 0.7, 2.0, 4.5] {
                let a = qfi_lossy_at_mean_photon(n, k, 0.0).unwrap();
                let b = qfi_at_mean_photon(n, k).unwrap();
                assert_relative_eq!(a.qfi, b.qfi, max_relative = 1e-12);
                assert_eq!(a.n_bar, b.n_bar);
            }
        }
    }

    #[test]
    fn qfi_decreases_with_loss() {
        for k in [1.0, 2.0, 5.0] {
            for n in [0.5, 1.0, 2.0, 3.0, 5.0] {
                let mut prev = f64::INFINITY;
                for i in 0..=9 {
                    let q = qfi_lossy_at_mean_photon(n, k, 0.1 * i as f64).unwrap().qfi;
                    assert!(q <= prev, "k={k} n={n} R={}", 0.1 * i as f64);
                    prev = q;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn spectrum_is_a_probability_vector(a in 0.0f64..3.0, k in 0.1f64..8.0, r in 0.0f64..=1.0) {
            let st = apply_loss(&params(a, k), &LossChannel::from_loss(r).unwrap(), 0.3);
            let sp = spectral_decomposition(&st);
            prop_assert!((sp.lambda_plus + sp.lambda_minus - 1.0).abs() < 1e-14);
            prop_assert!(sp.lambda_minus >= 0.0 && sp.lambda_plus <= 1.0 + 1e-15);
            let x = st.params.intensity();
            // strictly positive unless flushed
            prop_assert!(st.sensor_overlap <= 1.0 && st.coherence <= 1.0);
            prop_assert!(st.sensor_overlap > 0.0 || 2.0 * (1.0 - r) * x > 700.0);
            prop_assert!(st.coherence > 0.0 || 2.0 * r * x > 700.0);
            let sc = st.sensor_overlap * st.coherence;
            prop_assert!((sc - (-2.0 * x).exp()).abs() < 1e-15);
        }

        #[test]
        fn lossless_reduces_to_pure(a in 0.0f64..3.0, k in 0.1f64..15.0) {
            let p = params(a, k);
            let pure = qfi_pure(&p).qfi;
            let lossy = qfi_lossy(&p, &LossChannel::lossless()).qfi;
            prop_assert!((pure - lossy).abs() <= 1e-8 * pure.max(1e-300));
        }

        #[test]
        fn loss_never_adds_information(a in 0.0f64..3.0, k in 0.1f64..8.0, r in 0.0f64..=1.0) {
            let p = params(a, k);
            let lossy = qfi_lossy(&p, &LossChannel::from_loss(r).unwrap()).qfi;
            prop_assert!(lossy <= qfi_pure(&p).qfi + 1e-9);
        }

        #[test]
        fn even_in_k_and_phase_blind(a in 0.0f64..3.0, k in 0.1f64..8.0, r in 0.0f64..=1.0, th in -3.2f64..3.2) {
            let ch = LossChannel::from_loss(r).unwrap();
            let base = qfi_lossy(&params(a, k), &ch).qfi;
            let flipped = qfi_lossy(&params(a, -k), &ch).qfi;
            let rotated = qfi_lossy(&EcsParams::new(Complex64::from_polar(a, th), k).unwrap(), &ch).qfi;
            prop_assert_eq!(base, flipped);
            prop_assert!((base - rotated).abs() <= 1e-12 * base.max(1e-300));
        }
    }
}
