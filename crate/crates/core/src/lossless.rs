//! Pure-state quantum Fisher information of the phase-encoded input state.

use crate::ecs::{amplitude_for_mean_photon, photon_statistics, EcsParams};
use crate::error::Result;
use crate::loss::LossyTerms;

/// QFI together with the reference curves it is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiReport {
    pub qfi: f64,
    /// `1/√F_Q` for a single probe; infinite when `qfi == 0`.
    pub delta_phi_min: f64,
    /// Total mean photon number of the (lossless) input state.
    pub n_bar: f64,
    /// Standard quantum limit, `F = n̄`.
    pub sql_qfi: f64,
    /// Heisenberg limit, `F = n̄²`.
    pub heisenberg_qfi: f64,
    /// Per-eigenvector contributions; present only for lossy evaluations.
    pub terms: Option<LossyTerms>,
}

impl QfiReport {
    pub(crate) fn new(qfi: f64, n_bar: f64, terms: Option<LossyTerms>) -> Self {
        let delta_phi_min = if qfi > 0.0 {
            qfi.sqrt().recip()
        } else {
            f64::INFINITY
        };
        Self {
            qfi,
            delta_phi_min,
            n_bar,
            sql_qfi: n_bar,
            heisenberg_qfi: n_bar * n_bar,
            terms,
        }
    }

    pub fn beats_sql(&self) -> bool {
        self.qfi > self.sql_qfi
    }

    pub fn beats_heisenberg(&self) -> bool {
        self.qfi > self.heisenberg_qfi
    }
}

/// `4(⟨n₂²⟩ − ⟨n₂⟩²)` for the phase generator `n₂`.
pub fn qfi_from_mode_variance(params: &EcsParams) -> f64 {
    let s = photon_statistics(params);
    let k2 = params.k() * params.k();
    let a2 = params.alpha_sq();
    // ⟨n₂²⟩ − ⟨n₂⟩² = n₂ + k⁴|α|⁴ − n₂², grouped as n₂ + (k²|α|² − n₂)(k²|α|² + n₂)
    let m = k2 * a2;
    4.0 * (s.n2 + (m - s.n2) * (m + s.n2))
}

/// `(2k/(1+k²))² [⟨n⟩ + k²(Δn)²]`, the same QFI written through total-number moments.
pub fn qfi_from_total_moments(params: &EcsParams) -> f64 {
    let s = photon_statistics(params);
    let k = params.k();
    let k2 = k * k;
    let pref = 2.0 * k / (1.0 + k2);
    pref * pref * (s.n_total + k2 * s.var_total)
}

/// Pure-state QFI of `e^{iφn₂}|Ψ⟩`.
///
/// Both algebraic routes are evaluated; the mode-variance form is returned.
pub fn qfi_pure(params: &EcsParams) -> QfiReport {
    let qfi = qfi_from_mode_variance(params);
    debug_assert!({
        let alt = qfi_from_total_moments(params);
        (qfi - alt).abs() <= 1e-12 * qfi.abs().max(alt.abs()).max(1e-300)
    });
    QfiReport::new(qfi, photon_statistics(params).n_total, None)
}

/// Lossless QFI at a prescribed total mean photon number.
pub fn qfi_at_mean_photon(n_bar: f64, k: f64) -> Result<QfiReport> {
    let a = amplitude_for_mean_photon(n_bar, k)?;
    let params = EcsParams::real(a, k)?;
    let mut report = qfi_pure(&params);
    // report the requested n̄ rather than the round-tripped value
    report.n_bar = n_bar;
    report.sql_qfi = n_bar;
    report.heisenberg_qfi = n_bar * n_bar;
    Ok(report)
}

/// `k / (2√(⟨n⟩ + k²(Δn)²))`, reported next to `delta_phi_min`.
///
/// Returns `f64::INFINITY` when the radicand vanishes (the vacuum). Note that
/// `delta_phi_min` equals this value times `1 + 1/k²` exactly, so it approaches
/// the bound from above as `k` grows.
pub fn asymptotic_bound(params: &EcsParams) -> f64 {
    let s = photon_statistics(params);
    let k = params.k();
    let radicand = s.n_total + k * k * s.var_total;
    if radicand <= 0.0 {
        return f64::INFINITY;
    }
    k.abs() / (2.0 * radicand.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn vacuum_has_no_information() {
        let r = qfi_pure(&EcsParams::real(0.0, 1.0).unwrap());
        assert_eq!(r.qfi, 0.0);
        assert!(r.delta_phi_min.is_infinite());
        assert_eq!(qfi_at_mean_photon(0.0, 4.0).unwrap().qfi, 0.0);
    }

    #[test]
    fn symmetric_unit_amplitude() {
        // 4(1 + tanh 2 − tanh² 2)
        let r = qfi_pure(&EcsParams::real(1.0, 1.0).unwrap());
        assert_relative_eq!(r.qfi, 4.138_713_619_715_925, max_relative = 1e-14);
    }

    #[test]
    fn strongly_asymmetric_small_amplitude() {
        let r = qfi_pure(&EcsParams::real(0.011_878f64.sqrt(), 10.0).unwrap());
        assert_relative_eq!(r.qfi, 5.682_690_183_730_624, max_relative = 1e-12);
    }

    #[test]
    fn mean_photon_entry_point() {
        let r = qfi_at_mean_photon(2.0, 10.0).unwrap();
        assert_relative_eq!(r.qfi, 8.962_343_410_659_726, max_relative = 1e-11);
        assert!((r.qfi / 9.05 - 1.0).abs() < 0.05);
        assert_eq!(r.sql_qfi, 2.0);
        assert_eq!(r.heisenberg_qfi, 4.0);

        let r = qfi_at_mean_photon(4.0, 10.0).unwrap();
        assert!(r.qfi > 16.0 || (r.qfi / 16.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn bound_sentinel_on_vacuum() {
        assert!(asymptotic_bound(&EcsParams::real(0.0, 10.0).unwrap()).is_infinite());
    }

    #[test]
    fn bound_from_independent_moments() {
        let p = EcsParams::real(1.0, 10.0).unwrap();
        // x = 101, tanh x = 1 to double precision: ⟨n⟩ = 101, Δn² = 101
        let expected = 10.0 / (2.0 * (101.0 + 100.0 * 101.0f64).sqrt());
        assert_relative_eq!(asymptotic_bound(&p), expected, max_relative = 1e-14);
    }

    #[test]
    fn delta_phi_min_sits_just_above_the_bound_for_large_k() {
        for k in [5.0, 10.0, 20.0] {
            for i in 0..=39 {
                let a2 = 0.1 + 0.1 * i as f64;
                let p = EcsParams::real(a2.sqrt(), k).unwrap();
                let dphi = qfi_pure(&p).delta_phi_min;
                let bound = asymptotic_bound(&p);
                assert!(dphi > bound);
                assert_relative_eq!(dphi / bound, 1.0 + 1.0 / (k * k), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn qfi_grows_with_mean_photon() {
        for k in [1.0, 2.0, 5.0, 10.0] {
            let mut prev = -1.0;
            for i in 0..=50 {
                let q = qfi_at_mean_photon(0.1 * i as f64, k).unwrap().qfi;
                assert!(q > prev, "k={k} i={i}");
                prev = q;
            }
        }
    }

    #[test]
    fn asymmetry_helps_at_fixed_mean_photon() {
        for i in 0..=45 {
            let n = 0.5 + 0.1 * i as f64;
            let q: Vec<f64> = [1.0, 2.0, 10.0]
                .iter()
                .map(|&k| qfi_at_mean_photon(n, k).unwrap().qfi)
                .collect();
            assert!(q[0] <= q[1] && q[1] <= q[2], "n={n}: {q:?}");
            assert!(q[0] >= n);
        }
    }

    proptest! {
        #[test]
        fn dual_formulas_agree(a in 0.0f64..3.0, k in 0.05f64..25.0) {
            let p = EcsParams::real(a, k).unwrap();
            let f6 = qfi_from_mode_variance(&p);
            let f14 = qfi_from_total_moments(&p);
            prop_assert!((f6 - f14).abs() <= 1e-12 * f6.max(f14).max(1e-300));
        }

        #[test]
        fn even_in_k_and_phase_blind(a in 0.0f64..3.0, k in 0.05f64..25.0, th in -3.2f64..3.2) {
            let base = qfi_pure(&EcsParams::real(a, k).unwrap()).qfi;
            let flipped = qfi_pure(&EcsParams::real(a, -k).unwrap()).qfi;
            let rotated = qfi_pure(&EcsParams::new(Complex64::from_polar(a, th), k).unwrap()).qfi;
            prop_assert_eq!(base, flipped);
            prop_assert!((base - rotated).abs() <= 1e-13 * base.max(1e-300));
        }
    }
}
