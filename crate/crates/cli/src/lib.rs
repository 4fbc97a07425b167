//! Command-line front end: table reproduction, figure-data sweeps and the
//! oracle verification suite.

pub mod config;
pub mod error;
pub mod format;
pub mod output;
pub mod sweep;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{FileConfig, SweepConfig};
use crate::error::{CliError, Result};
use crate::sweep::SweepKind;
use crate::table::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ecsense",
    version,
    about = "Phase-estimation precision of entangled coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Asymmetry parameters, comma separated.
    #[arg(
        long = "k",
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub k: Option<Vec<f64>>,
    /// Photon loss rates R, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub loss: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub nbar_min: Option<f64>,
    #[arg(long, global = true)]
    pub nbar_max: Option<f64>,
    #[arg(long, global = true)]
    pub nbar_steps: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi_max: Option<f64>,
    #[arg(long, global = true)]
    pub phi_steps: Option<usize>,
    /// Per-mode Fock cutoff of the oracle; default is the tail rule.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// JSON file with defaults for the sweep flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Table1,
    Table2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute a published QFI table with closed form and oracle.
    Table {
        #[arg(value_enum)]
        which: TableArg,
    },
    /// Emit figure data as CSV.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
    },
    /// Run the closed-form-vs-oracle suite on seeded random parameters.
    Verify {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

impl CommonArgs {
    fn as_file_config(&self) -> FileConfig {
        FileConfig {
            k_list: self.k.clone(),
            r_list: self.loss.clone(),
            nbar_min: self.nbar_min,
            nbar_max: self.nbar_max,
            nbar_steps: self.nbar_steps,
            phi_min: self.phi_min,
            phi_max: self.phi_max,
            phi_steps: self.phi_steps,
            cutoff: self.cutoff,
            out: self.out.clone(),
        }
    }

    /// File values overlaid by flags.
    fn merged(&self) -> Result<FileConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(file.overlay(self.as_file_config()))
    }

    fn sweep_config(&self, kind: SweepKind) -> Result<SweepConfig> {
        SweepConfig::resolve(self.merged()?, &kind.defaults())
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let jobs = cli.common.jobs as usize;
    match &cli.command {
        Command::Table { which } => {
            let merged = cli.common.merged()?;
            if merged.cutoff == Some(0) {
                return Err(CliError::Usage("cutoff must be positive".into()));
            }
            let which = match which {
                TableArg::Table1 => Table::Table1,
                TableArg::Table2 => Table::Table2,
            };
            table::cmd_table(which, merged.cutoff, jobs, merged.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Sweep { kind } => {
            let cfg = cli.common.sweep_config(*kind)?;
            sweep::cmd_sweep(*kind, &cfg, jobs)?;
            Ok(EXIT_OK)
        }
        Command::Verify { tol, samples, seed } => {
            let merged = cli.common.merged()?;
            let report = verify::run_verify(*tol, *samples, *seed, merged.cutoff, jobs)?;
            let text = report.render();
            match merged.out.as_deref() {
                Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Output {
                    path: path.display().to_string(),
                    source,
                })?,
                None => std::io::stdout().lock().write_all(text.as_bytes())?,
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
