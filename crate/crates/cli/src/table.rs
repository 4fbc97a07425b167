//! Reproduction of the published QFI tables.

use std::path::Path;

use ecsense_core::fock::{build_density_matrix, qfi_of};
use ecsense_core::{amplitude_for_mean_photon, qfi_lossy, EcsParams, LossChannel};

use crate::error::Result;
use crate::format::fmt_g;
use crate::output::{par_map, write_csv};

pub const TABLE_HEADER: [&str; 6] = [
    "n_bar",
    "n_bar_sq",
    "F_Q_closed",
    "F_Q_oracle",
    "paper_value",
    "rel_dev_paper",
];

/// Mean photon numbers of the table rows.
pub const TABLE_NBAR: [f64; 9] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];

/// Published lossless QFI, k = 10.
pub const TABLE1_PUBLISHED: [f64; 9] = [5.78, 7.44, 9.05, 10.48, 12.36, 13.97, 16.05, 17.98, 20.54];

/// Published lossy QFI, k = 2, R = 0.3.
pub const TABLE2_PUBLISHED: [f64; 9] = [2.92, 4.06, 5.11, 6.15, 7.21, 8.26, 9.36, 10.40, 11.50];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Table1,
    Table2,
}

impl Table {
    pub fn k(self) -> f64 {
        match self {
            Table::Table1 => 10.0,
            Table::Table2 => 2.0,
        }
    }

    pub fn loss(self) -> f64 {
        match self {
            Table::Table1 => 0.0,
            Table::Table2 => 0.3,
        }
    }

    pub fn published(self) -> &'static [f64; 9] {
        match self {
            Table::Table1 => &TABLE1_PUBLISHED,
            Table::Table2 => &TABLE2_PUBLISHED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n_bar: f64,
    pub qfi_closed: f64,
    pub qfi_oracle: f64,
    pub published: f64,
}

impl TableRow {
    pub fn rel_dev_published(&self) -> f64 {
        (self.qfi_closed - self.published) / self.published
    }

    pub fn rel_dev_oracle(&self) -> f64 {
        (self.qfi_closed - self.qfi_oracle).abs() / self.qfi_oracle.abs()
    }

    fn to_record(self) -> Vec<String> {
        vec![
            fmt_g(self.n_bar),
            fmt_g(self.n_bar * self.n_bar),
            fmt_g(self.qfi_closed),
            fmt_g(self.qfi_oracle),
            fmt_g(self.published),
            fmt_g(self.rel_dev_published()),
        ]
    }
}

pub fn compute_table(which: Table, cutoff: Option<usize>, jobs: usize) -> Result<Vec<TableRow>> {
    let channel = LossChannel::from_loss(which.loss())?;
    let k = which.k();
    let idx: Vec<usize> = (0..TABLE_NBAR.len()).collect();
    par_map(jobs, &idx, |&i| {
        let n_bar = TABLE_NBAR[i];
        let params = EcsParams::real(amplitude_for_mean_photon(n_bar, k)?, k)?;
        let qfi_closed = qfi_lossy(&params, &channel).qfi;
        let qfi_oracle = qfi_of(&build_density_matrix(&params, &channel, 0.0, cutoff)?);
        Ok(TableRow {
            n_bar,
            qfi_closed,
            qfi_oracle,
            published: which.published()[i],
        })
    })
}

pub fn cmd_table(
    which: Table,
    cutoff: Option<usize>,
    jobs: usize,
    out: Option<&Path>,
) -> Result<()> {
    let rows = compute_table(which, cutoff, jobs)?;
    let worst_oracle = rows.iter().map(|r| r.rel_dev_oracle()).fold(0.0, f64::max);
    let worst_published = rows
        .iter()
        .map(|r| r.rel_dev_published().abs())
        .fold(0.0, f64::max);
    log::info!(
        "max |closed - oracle|/oracle = {}, max |closed - published|/published = {}",
        fmt_g(worst_oracle),
        fmt_g(worst_published)
    );
    let records: Vec<Vec<String>> = rows.into_iter().map(TableRow::to_record).collect();
    write_csv(out, &TABLE_HEADER, &records)
}
