//! Figure-data sweeps.

use clap::ValueEnum;
use ecsense_core::fock::{build_density_matrix, qfi_of};
use ecsense_core::{
    amplitude_for_mean_photon, open_phase_grid, optimal_phase_error, phase_error, qfi_lossy,
    sz_statistics, EcsParams, Error, LossChannel, PhaseSensitivity,
};

use crate::config::{self, SweepConfig};
use crate::error::Result;
use crate::format::fmt_g;
use crate::output::{par_map, write_csv};

pub const QFI_HEADER: [&str; 7] = [
    "n_bar",
    "k",
    "R",
    "qfi_closed",
    "qfi_oracle",
    "sql",
    "heisenberg",
];

pub const DELTA_PHI_HEADER: [&str; 9] = [
    "phi",
    "n_bar",
    "k",
    "R",
    "sz_mean",
    "sz_var",
    "slope",
    "delta_phi",
    "crb",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepKind {
    /// QFI against n̄ without loss, one block per k.
    QfiLossless,
    /// QFI against n̄ for every (k, R), n̄ innermost.
    QfiLossy,
    /// QFI against R for every (k, n̄), R innermost.
    QfiVsLoss,
    /// Intensity-difference phase error against φ for every (k, R, n̄).
    DeltaPhi,
    /// Phase error at the grid-optimal φ against n̄ for every (k, R).
    DeltaPhiOptimal,
}

impl SweepKind {
    pub fn defaults(self) -> SweepConfig {
        match self {
            SweepKind::QfiLossless => config::defaults_qfi_lossless(),
            SweepKind::QfiLossy => config::defaults_qfi_lossy(),
            SweepKind::QfiVsLoss => config::defaults_qfi_vs_loss(),
            SweepKind::DeltaPhi => config::defaults_delta_phi(),
            SweepKind::DeltaPhiOptimal => config::defaults_delta_phi_optimal(),
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            SweepKind::QfiLossless | SweepKind::QfiLossy | SweepKind::QfiVsLoss => &QFI_HEADER,
            SweepKind::DeltaPhi | SweepKind::DeltaPhiOptimal => &DELTA_PHI_HEADER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    k: f64,
    r: f64,
    n_bar: f64,
    phi: f64,
}

fn points(kind: SweepKind, cfg: &SweepConfig) -> Vec<Point> {
    let nbars = cfg.nbar.linspace();
    let phis = cfg.phi.linspace();
    let losses: &[f64] = if kind == SweepKind::QfiLossless {
        &[0.0]
    } else {
        &cfg.r_list
    };
    let mut out = Vec::new();
    for &k in &cfg.k_list {
        match kind {
            SweepKind::QfiVsLoss => {
                for &n_bar in &nbars {
                    for &r in losses {
                        out.push(Point {
                            k,
                            r,
                            n_bar,
                            phi: 0.0,
                        });
                    }
                }
            }
            SweepKind::DeltaPhi => {
                for &r in losses {
                    for &n_bar in &nbars {
                        for &phi in &phis {
                            out.push(Point { k, r, n_bar, phi });
                        }
                    }
                }
            }
            _ => {
                for &r in losses {
                    for &n_bar in &nbars {
                        out.push(Point {
                            k,
                            r,
                            n_bar,
                            phi: 0.0,
                        });
                    }
                }
            }
        }
    }
    out
}

fn state(p: &Point) -> Result<(EcsParams, LossChannel)> {
    let params = EcsParams::real(amplitude_for_mean_photon(p.n_bar, p.k)?, p.k)?;
    Ok((params, LossChannel::from_loss(p.r)?))
}

fn qfi_row(p: &Point, cutoff: Option<usize>) -> Result<Vec<String>> {
    let (params, channel) = state(p)?;
    let closed = qfi_lossy(&params, &channel).qfi;
    let oracle = qfi_of(&build_density_matrix(&params, &channel, p.phi, cutoff)?);
    Ok(vec![
        fmt_g(p.n_bar),
        fmt_g(p.k),
        fmt_g(p.r),
        fmt_g(closed),
        fmt_g(oracle),
        fmt_g(p.n_bar),
        fmt_g(p.n_bar * p.n_bar),
    ])
}

fn delta_phi_row(
    p: &Point,
    sens: &PhaseSensitivity,
    params: &EcsParams,
    channel: &LossChannel,
) -> Vec<String> {
    let st = sz_statistics(params, channel, sens.phi);
    vec![
        fmt_g(sens.phi),
        fmt_g(p.n_bar),
        fmt_g(p.k),
        fmt_g(p.r),
        fmt_g(st.mean),
        fmt_g(st.variance),
        fmt_g(st.slope),
        fmt_g(sens.delta_phi),
        fmt_g(sens.crb),
    ]
}

/// Rows of a sweep in deterministic input order.
pub fn sweep_rows(kind: SweepKind, cfg: &SweepConfig, jobs: usize) -> Result<Vec<Vec<String>>> {
    let pts = points(kind, cfg);
    match kind {
        SweepKind::QfiLossless | SweepKind::QfiLossy | SweepKind::QfiVsLoss => {
            par_map(jobs, &pts, |p| qfi_row(p, cfg.cutoff))
        }
        SweepKind::DeltaPhi => par_map(jobs, &pts, |p| {
            let (params, channel) = state(p)?;
            Ok(delta_phi_row(
                p,
                &phase_error(&params, &channel, p.phi),
                &params,
                &channel,
            ))
        }),
        SweepKind::DeltaPhiOptimal => {
            let grid = open_phase_grid(cfg.phi.min, cfg.phi.max, cfg.phi.steps);
            par_map(jobs, &pts, |p| {
                let (params, channel) = state(p)?;
                match optimal_phase_error(&params, &channel, &grid) {
                    Ok(best) => Ok(delta_phi_row(p, &best, &params, &channel)),
                    // no signal anywhere on the grid (vacuum input)
                    Err(Error::AllDegenerate) => {
                        let crb = qfi_lossy(&params, &channel).delta_phi_min;
                        let flat = PhaseSensitivity {
                            delta_phi: f64::INFINITY,
                            phi: grid[0],
                            crb,
                            degenerate: true,
                        };
                        Ok(delta_phi_row(p, &flat, &params, &channel))
                    }
                    Err(e) => Err(e.into()),
                }
            })
        }
    }
}

pub fn cmd_sweep(kind: SweepKind, cfg: &SweepConfig, jobs: usize) -> Result<()> {
    let rows = sweep_rows(kind, cfg, jobs)?;
    write_csv(cfg.out.as_deref(), kind.header(), &rows)
}
