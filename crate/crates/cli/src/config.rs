//! Sweep configuration: JSON file, command-line flags and per-kind defaults.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, Result};

/// Mirror of the command-line flags; every key is optional.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k_list: Option<Vec<f64>>,
    pub r_list: Option<Vec<f64>>,
    pub nbar_min: Option<f64>,
    pub nbar_max: Option<f64>,
    pub nbar_steps: Option<usize>,
    pub phi_min: Option<f64>,
    pub phi_max: Option<f64>,
    pub phi_steps: Option<usize>,
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Config {
            path: path.display().to_string(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: FileConfig) -> FileConfig {
        FileConfig {
            k_list: over.k_list.or(self.k_list),
            r_list: over.r_list.or(self.r_list),
            nbar_min: over.nbar_min.or(self.nbar_min),
            nbar_max: over.nbar_max.or(self.nbar_max),
            nbar_steps: over.nbar_steps.or(self.nbar_steps),
            phi_min: over.phi_min.or(self.phi_min),
            phi_max: over.phi_max.or(self.phi_max),
            phi_steps: over.phi_steps.or(self.phi_steps),
            cutoff: over.cutoff.or(self.cutoff),
            out: over.out.or(self.out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    /// `steps` points from `min` to `max` inclusive; a single step yields `min`.
    pub fn linspace(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + h * i as f64
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(usage(format!("{name} range must be finite")));
        }
        if self.min > self.max {
            return Err(usage(format!(
                "{name} range is empty: min {} > max {}",
                self.min, self.max
            )));
        }
        if self.steps == 0 {
            return Err(usage(format!("{name} steps must be at least 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub k_list: Vec<f64>,
    pub r_list: Vec<f64>,
    pub nbar: Range,
    pub phi: Range,
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    /// Fills unset fields from `defaults` and checks the invariants.
    pub fn resolve(given: FileConfig, defaults: &SweepConfig) -> Result<Self> {
        let cfg = SweepConfig {
            k_list: given.k_list.unwrap_or_else(|| defaults.k_list.clone()),
            r_list: given.r_list.unwrap_or_else(|| defaults.r_list.clone()),
            nbar: Range {
                min: given.nbar_min.unwrap_or(defaults.nbar.min),
                max: given.nbar_max.unwrap_or(defaults.nbar.max),
                steps: given.nbar_steps.unwrap_or(defaults.nbar.steps),
            },
            phi: Range {
                min: given.phi_min.unwrap_or(defaults.phi.min),
                max: given.phi_max.unwrap_or(defaults.phi.max),
                steps: given.phi_steps.unwrap_or(defaults.phi.steps),
            },
            cutoff: given.cutoff.or(defaults.cutoff),
            out: given.out.or_else(|| defaults.out.clone()),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_list.is_empty() {
            return Err(usage("k list is empty".into()));
        }
        if let Some(k) = self.k_list.iter().find(|k| !k.is_finite() || **k == 0.0) {
            return Err(usage(format!("invalid asymmetry k = {k}")));
        }
        if self.r_list.is_empty() {
            return Err(usage("loss list is empty".into()));
        }
        if let Some(r) = self.r_list.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(usage(format!("loss rate {r} outside [0, 1]")));
        }
        self.nbar.validate("n_bar")?;
        if self.nbar.min < 0.0 {
            return Err(usage(format!(
                "n_bar must be non-negative, got {}",
                self.nbar.min
            )));
        }
        self.phi.validate("phi")?;
        if self.cutoff == Some(0) {
            return Err(usage("cutoff must be positive".into()));
        }
        Ok(())
    }
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn sweep(k: &[f64], r: &[f64], nbar: (f64, f64, usize), phi: (f64, f64, usize)) -> SweepConfig {
    SweepConfig {
        k_list: k.to_vec(),
        r_list: r.to_vec(),
        nbar: Range {
            min: nbar.0,
            max: nbar.1,
            steps: nbar.2,
        },
        phi: Range {
            min: phi.0,
            max: phi.1,
            steps: phi.2,
        },
        cutoff: None,
        out: None,
    }
}

/// Loss rates 0, 0.05, …, 1.
fn loss_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

pub fn defaults_qfi_lossless() -> SweepConfig {
    sweep(&[1.0, 2.0, 10.0], &[0.0], (0.0, 5.0, 51), (0.0, 0.0, 1))
}

pub fn defaults_qfi_lossy() -> SweepConfig {
    sweep(&[1.0, 2.0, 10.0], &[0.3], (0.0, 5.0, 51), (0.0, 0.0, 1))
}

pub fn defaults_qfi_vs_loss() -> SweepConfig {
    sweep(&[1.0, 2.0, 5.0], &loss_grid(), (2.0, 2.0, 1), (0.0, 0.0, 1))
}

pub fn defaults_delta_phi() -> SweepConfig {
    sweep(&[1.0, 2.0, 5.0], &[0.0, 0.3], (2.0, 2.0, 1), (0.0, PI, 181))
}

pub fn defaults_delta_phi_optimal() -> SweepConfig {
    sweep(
        &[1.0, 2.0, 5.0],
        &[0.0, 0.3],
        (0.5, 5.0, 10),
        (0.0, PI, 721),
    )
}
