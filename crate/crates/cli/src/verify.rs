//! Seeded closed-form-vs-oracle verification suite.

use std::f64::consts::PI;
use std::fmt::Write as _;

use ecsense_core::fock::{build_density_matrix, observable_moments_numeric, qfi_of, DensityMatrix};
use ecsense_core::lossless::{qfi_from_mode_variance, qfi_from_total_moments};
use ecsense_core::{
    apply_loss, qfi_lossy, qfi_pure, spectral_decomposition, sz_statistics, Complex64, EcsParams,
    LossChannel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::format::fmt_g;
use crate::output::par_map;

pub const MAX_ALPHA_SQ: f64 = 2.0;
pub const MIN_ALPHA_SQ: f64 = 0.01;
pub const K_RANGE: (f64, f64) = (1.0, 5.0);
pub const MAX_LOSS: f64 = 0.6;

/// Largest Hilbert-space dimension diagonalized densely during verification.
pub const VERIFY_DENSE_DIM: usize = 1024;

/// Failing tuples printed per check.
const MAX_LISTED: usize = 5;

/// Finite-difference step for the slope check.
const FD_STEP: f64 = 1e-3;

/// Offset of the second phase in the phase-independence check.
const PHASE_SHIFT: f64 = 1.0;

pub struct Check {
    pub name: &'static str,
    /// Tolerance of the check itself; `--tol` can only tighten it.
    pub intrinsic: f64,
}

pub const CHECKS: [Check; 13] = [
    Check {
        name: "qfi_dual_formula",
        intrinsic: 1e-10,
    },
    Check {
        name: "qfi_lossless_vs_oracle",
        intrinsic: 1e-6,
    },
    Check {
        name: "qfi_lossy_vs_oracle",
        intrinsic: 1e-6,
    },
    Check {
        name: "trace",
        intrinsic: 1e-10,
    },
    Check {
        name: "positivity",
        intrinsic: 1e-10,
    },
    Check {
        name: "purity",
        intrinsic: 1e-10,
    },
    Check {
        name: "eigenvalues",
        intrinsic: 1e-10,
    },
    Check {
        name: "lossless_reduction",
        intrinsic: 1e-12,
    },
    Check {
        name: "phase_independence",
        intrinsic: 1e-8,
    },
    Check {
        name: "k_parity",
        intrinsic: 1e-8,
    },
    Check {
        name: "alpha_phase",
        intrinsic: 1e-8,
    },
    Check {
        name: "sz_moments_vs_oracle",
        intrinsic: 1e-7,
    },
    Check {
        name: "slope_finite_difference",
        intrinsic: 1e-6,
    },
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub alpha: Complex64,
    pub k: f64,
    pub loss: f64,
    pub phi: f64,
}

impl Sample {
    fn describe(&self) -> String {
        format!(
            "alpha=({},{}) k={} R={} phi={}",
            fmt_g(self.alpha.re),
            fmt_g(self.alpha.im),
            fmt_g(self.k),
            fmt_g(self.loss),
            fmt_g(self.phi)
        )
    }
}

/// Deterministic parameter draws: `|α|² ∈ [0.01, 2]` with uniform phase,
/// `k ∈ [1, 5]`, `R ∈ [0, 0.6]`, `φ ∈ (0, π)`.
pub fn draw_samples(samples: usize, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let a2: f64 = rng.random_range(MIN_ALPHA_SQ..=MAX_ALPHA_SQ);
            let theta: f64 = rng.random_range(-PI..PI);
            let k = rng.random_range(K_RANGE.0..=K_RANGE.1);
            let loss = rng.random_range(0.0..=MAX_LOSS);
            let mut phi: f64 = rng.random_range(0.0..PI);
            while phi == 0.0 {
                phi = rng.random_range(0.0..PI);
            }
            Sample {
                alpha: Complex64::from_polar(a2.sqrt(), theta),
                k,
                loss,
                phi,
            }
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Deviation of two `S_z` moment pairs: the mean is compared on the scale of
/// `√⟨S_z²⟩`, the second moment relatively.
fn moments_dev(a: (f64, f64), b: (f64, f64)) -> f64 {
    let scale = a.1.abs().max(b.1.abs()).sqrt();
    let mean = if scale == 0.0 {
        0.0
    } else {
        (a.0 - b.0).abs() / scale
    };
    mean.max(rel(a.1, b.1))
}

/// Deviations of one sample, in the order of [`CHECKS`].
pub fn evaluate(s: &Sample, cutoff: Option<usize>) -> Result<[f64; 13]> {
    let params = EcsParams::new(s.alpha, s.k)?;
    let real = EcsParams::real(s.alpha.norm(), s.k)?;
    let flipped = EcsParams::new(s.alpha, -s.k)?;
    let channel = LossChannel::from_loss(s.loss)?;
    let lossless = LossChannel::lossless();
    let build = |p: &EcsParams, ch: &LossChannel, phi: f64| -> Result<DensityMatrix> {
        Ok(build_density_matrix(p, ch, phi, cutoff)?)
    };

    let rho = build(&params, &channel, s.phi)?;
    let closed = qfi_lossy(&params, &channel).qfi;
    let oracle = qfi_of(&rho);

    let dual = rel(
        qfi_from_mode_variance(&params),
        qfi_from_total_moments(&params),
    );
    let pure = qfi_pure(&params).qfi;
    let lossless_oracle = rel(pure, qfi_of(&build(&params, &lossless, s.phi)?));
    let lossy_oracle = rel(closed, oracle);

    let trace = (rho.trace() - 1.0).abs();
    let range = rho.range_eigen();
    let mut positivity = range.values.iter().fold(0.0f64, |m, &v| m.max(-v));
    if rho.dim() <= VERIFY_DENSE_DIM {
        let dense = rho.dense_eigen()?;
        let n = dense.values.len();
        positivity = positivity.max(-dense.values[0]);
        // rank ≤ 2
        if n > 2 {
            positivity = positivity.max(dense.values[n - 3].abs());
        }
    }
    let spectrum = spectral_decomposition(&apply_loss(&params, &channel, s.phi));
    let purity = (spectrum.purity() - rho.purity()).abs();
    let numeric_top = |i: usize| range.values.get(i).copied().unwrap_or(0.0);
    let eigenvalues = (spectrum.lambda_plus - numeric_top(0))
        .abs()
        .max((spectrum.lambda_minus - numeric_top(1)).abs());

    let reduction = rel(qfi_lossy(&params, &lossless).qfi, pure);
    let phase = rel(
        oracle,
        qfi_of(&build(&params, &channel, s.phi + PHASE_SHIFT)?),
    );
    let parity = rel(closed, qfi_lossy(&flipped, &channel).qfi)
        .max(rel(oracle, qfi_of(&build(&flipped, &channel, s.phi)?)));

    let moments = observable_moments_numeric(&rho)?;
    let rho_real = build(&real, &channel, s.phi)?;
    let alpha_phase = rel(oracle, qfi_of(&rho_real))
        .max(moments_dev(moments, observable_moments_numeric(&rho_real)?));

    let st = sz_statistics(&params, &channel, s.phi);
    let sz = moments_dev((st.mean, st.second_moment), moments);

    let mean_at = |phi: f64| sz_statistics(&params, &channel, phi).mean;
    let h = FD_STEP;
    let fd = (mean_at(s.phi - 2.0 * h) - 8.0 * mean_at(s.phi - h) + 8.0 * mean_at(s.phi + h)
        - mean_at(s.phi + 2.0 * h))
        / (12.0 * h);
    let slope_scale = st.slope.abs().max(st.second_moment.abs().sqrt());
    let slope = if slope_scale == 0.0 {
        0.0
    } else {
        (st.slope - fd).abs() / slope_scale
    };

    Ok([
        dual,
        lossless_oracle,
        lossy_oracle,
        trace,
        positivity,
        purity,
        eigenvalues,
        reduction,
        phase,
        parity,
        alpha_phase,
        sz,
        slope,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub threshold: f64,
    pub max_dev: f64,
    /// Indices of failing samples in draw order.
    pub failures: Vec<usize>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub tol: f64,
    pub seed: u64,
    pub samples: Vec<Sample>,
    pub outcomes: Vec<CheckOutcome>,
    /// Deviations per sample, in the order of [`CHECKS`].
    pub deviations: Vec<[f64; 13]>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verify samples={} seed={} tol={}",
            self.samples.len(),
            self.seed,
            fmt_g(self.tol)
        );
        let _ = writeln!(
            out,
            "{:<26} {:>20} {:>20}  status",
            "check", "threshold", "max_deviation"
        );
        for o in &self.outcomes {
            let _ = writeln!(
                out,
                "{:<26} {:>20} {:>20}  {}",
                o.name,
                fmt_g(o.threshold),
                fmt_g(o.max_dev),
                if o.passed() { "PASS" } else { "FAIL" }
            );
        }
        for (ci, o) in self.outcomes.iter().enumerate() {
            for &i in o.failures.iter().take(MAX_LISTED) {
                let _ = writeln!(
                    out,
                    "FAIL {} sample={} {} deviation={}",
                    o.name,
                    i,
                    self.samples[i].describe(),
                    fmt_g(self.deviations[i][ci])
                );
            }
            if o.failures.len() > MAX_LISTED {
                let _ = writeln!(
                    out,
                    "FAIL {} ... {} more samples",
                    o.name,
                    o.failures.len() - MAX_LISTED
                );
            }
        }
        let passed = self.outcomes.iter().filter(|o| o.passed()).count();
        let _ = writeln!(
            out,
            "result: {} ({}/{} checks passed)",
            if self.passed() { "PASS" } else { "FAIL" },
            passed,
            self.outcomes.len()
        );
        out
    }
}

pub fn run_verify(
    tol: f64,
    samples: usize,
    seed: u64,
    cutoff: Option<usize>,
    jobs: usize,
) -> Result<VerifyReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if samples == 0 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    let draws = draw_samples(samples, seed);
    let deviations = par_map(jobs, &draws, |s| evaluate(s, cutoff))?;
    let outcomes = CHECKS
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let threshold = c.intrinsic.min(tol);
            let devs = deviations.iter().map(|d| d[ci]);
            CheckOutcome {
                name: c.name,
                threshold,
                max_dev: devs.clone().fold(0.0, |m: f64, d| {
                    if m.is_nan() || d.is_nan() {
                        f64::NAN
                    } else {
                        m.max(d)
                    }
                }),
                failures: devs
                    .enumerate()
                    .filter(|(_, d)| d.is_nan() || *d > threshold)
                    .map(|(i, _)| i)
                    .collect(),
            }
        })
        .collect();
    Ok(VerifyReport {
        tol,
        seed,
        samples: draws,
        outcomes,
        deviations,
    })
}
