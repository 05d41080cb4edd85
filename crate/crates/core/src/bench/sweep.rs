//! Grid sweeps producing one CSV row of aggregates per grid point.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bench::config::RunConfig;
use crate::bench::report::run_report;
use crate::error::{Error, Result};
use crate::trial::EstimatorKind;

/// CSV header, in column order.
pub const SWEEP_COLUMNS: [&str; 14] = [
    "k",
    "eps",
    "estimator",
    "family",
    "trials",
    "seed",
    "true_entropy",
    "predicted_worst_case_samples",
    "success_rate",
    "mean_abs_error",
    "p90_abs_error",
    "mean_samples",
    "max_registers",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub eps: f64,
    pub estimator: EstimatorKind,
    pub family: String,
    pub trials: u64,
    pub seed: u64,
    pub true_entropy: Option<f64>,
    pub predicted_worst_case_samples: Option<u64>,
    pub success_rate: Option<f64>,
    pub mean_abs_error: Option<f64>,
    pub p90_abs_error: Option<f64>,
    pub mean_samples: Option<f64>,
    pub max_registers: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub ks: Vec<usize>,
    pub eps: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    /// Family, constants, trials and seed shared by every point.
    pub base: RunConfig,
}

impl SweepGrid {
    pub fn points(&self) -> impl Iterator<Item = RunConfig> + '_ {
        self.ks.iter().flat_map(move |&k| {
            self.eps.iter().flat_map(move |&eps| {
                self.estimators.iter().map(move |&estimator| RunConfig {
                    k,
                    eps,
                    estimator,
                    out: None,
                    ..self.base.clone()
                })
            })
        })
    }
}

fn row_for(config: &RunConfig) -> SweepRow {
    let mut row = SweepRow {
        k: config.k,
        eps: config.eps,
        estimator: config.estimator,
        family: config.family.to_string(),
        trials: config.trials,
        seed: config.seed,
        true_entropy: None,
        predicted_worst_case_samples: None,
        success_rate: None,
        mean_abs_error: None,
        p90_abs_error: None,
        mean_samples: None,
        max_registers: None,
        error: None,
    };
    match run_report(config) {
        Ok(r) => {
            let a = r.aggregates;
            row.true_entropy = Some(r.true_entropy);
            row.predicted_worst_case_samples = Some(r.predicted_worst_case_samples);
            row.success_rate = Some(a.success_rate);
            row.mean_abs_error = a.mean_abs_error;
            row.p90_abs_error = a.p90_abs_error;
            row.mean_samples = a.mean_samples;
            row.max_registers = Some(a.max_registers);
            if a.failed_trials > 0 {
                row.error = Some(format!("{} trials failed", a.failed_trials));
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every grid point. A point that cannot run becomes a row with only
/// the error column filled in.
pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    if grid.ks.is_empty() || grid.eps.is_empty() || grid.estimators.is_empty() {
        return Err(Error::InvalidParameter("sweep grid is empty".into()));
    }
    Ok(grid.points().map(|c| row_for(&c)).collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(SWEEP_COLUMNS).map_err(io)?;
    }
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}

pub fn read_csv(text: &str) -> Result<Vec<SweepRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}
