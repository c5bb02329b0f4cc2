//! Parallel cross-product runs with a single collected output.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Format, Initial, Mode, SweepConfig};
use crate::error::CliResult;
use crate::output::{self, float, Table};
use crate::run::{self, Outcome, Report};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellResult {
    Report(Report),
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub theta: f64,
    pub initial_index: usize,
    pub initial: Initial,
    pub result: CellResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mode: Mode,
    /// False if any cell failed.
    pub passed: bool,
    pub cells: Vec<SweepCell>,
}

pub fn run_sweep(cfg: &SweepConfig) -> CliResult<SweepReport> {
    let (mode, cells) = cfg.cells()?;
    let cells: Vec<SweepCell> = cells
        .par_iter()
        .map(|cell| {
            let result = match cell.config.job().and_then(|job| run::run_job(&job)) {
                Ok(Outcome::Report(r)) => CellResult::Report(r),
                Ok(Outcome::Verify(_)) => {
                    unreachable!("verify is rejected before the sweep starts")
                }
                Err(e) => CellResult::Error(e.to_string()),
            };
            SweepCell {
                theta: cell.theta,
                initial_index: cell.initial_index,
                initial: cell.config.initial.expect("set by SweepConfig::cells"),
                result,
            }
        })
        .collect();
    Ok(SweepReport {
        mode,
        passed: cells
            .iter()
            .all(|c| matches!(c.result, CellResult::Report(_))),
        cells,
    })
}

/// One row per (theta, initial, n); failed cells get a single row carrying the error.
pub fn sweep_table(report: &SweepReport) -> Table {
    let summary = output::summary_header(report.mode);
    let mut header = vec!["theta", "initial", "n"];
    header.extend(&summary);
    header.push("error");
    let mut rows = Vec::new();
    for cell in &report.cells {
        let lead = [float(cell.theta), cell.initial_index.to_string()];
        match &cell.result {
            CellResult::Report(r) => {
                for (n, values) in output::summary_rows(r) {
                    let mut row = lead.to_vec();
                    row.push(n.map(|n| n.to_string()).unwrap_or_default());
                    row.extend(values);
                    row.push(String::new());
                    rows.push(row);
                }
            }
            CellResult::Error(e) => {
                let mut row = lead.to_vec();
                row.push(String::new());
                row.extend(summary.iter().map(|_| String::new()));
                row.push(e.clone());
                rows.push(row);
            }
        }
    }
    Table { header, rows }
}

pub fn write_sweep<W: Write>(out: W, report: &SweepReport, format: Format) -> CliResult<()> {
    match format {
        Format::Json => output::write_json(out, report),
        Format::Csv => sweep_table(report).write(out),
    }
}
