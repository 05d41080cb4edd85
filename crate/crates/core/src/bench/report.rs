//! Trial execution and the JSON run report.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::config::RunConfig;
use crate::dist::{exact_entropy, Pmf};
use crate::error::{Error, Result};
use crate::numeric::trial_seed;
use crate::trial::{run_trial, EstimatorConfig};

pub const REPORT_SCHEMA: &str = "streaming-entropy/run-report/v1";

/// Rounds to 12 significant digits, the precision reports are written at.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    /// Estimate in nats; absent when the trial failed.
    pub estimate: Option<f64>,
    pub abs_error: Option<f64>,
    pub samples_consumed: Option<u64>,
    pub registers_high_water: Option<usize>,
    pub degenerate_intervals: Vec<usize>,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn succeeded_within(&self, eps: f64) -> bool {
        matches!(self.abs_error, Some(e) if e <= eps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub success_rate: f64,
    pub mean_abs_error: Option<f64>,
    pub p90_abs_error: Option<f64>,
    pub mean_samples: Option<f64>,
    pub max_registers: usize,
    pub failed_trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub config: RunConfig,
    /// Unit of every entropy figure in the report; always "nats".
    pub units: String,
    pub true_entropy: f64,
    pub predicted_worst_case_samples: u64,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("report: {e}")))
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }
}

/// Nearest-rank percentile of an unsorted sample.
fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

pub fn aggregate(trials: &[TrialRecord], eps: f64) -> Aggregates {
    let errors: Vec<f64> = trials.iter().filter_map(|t| t.abs_error).collect();
    let samples: Vec<f64> = trials
        .iter()
        .filter_map(|t| t.samples_consumed)
        .map(|s| s as f64)
        .collect();
    let mean = |v: &[f64]| (!v.is_empty()).then(|| round12(v.iter().sum::<f64>() / v.len() as f64));
    let successes = trials.iter().filter(|t| t.succeeded_within(eps)).count();
    Aggregates {
        success_rate: successes as f64 / trials.len().max(1) as f64,
        mean_abs_error: mean(&errors),
        p90_abs_error: percentile(&errors, 0.9),
        mean_samples: mean(&samples),
        max_registers: trials
            .iter()
            .filter_map(|t| t.registers_high_water)
            .max()
            .unwrap_or(0),
        failed_trials: trials.iter().filter(|t| t.error.is_some()).count() as u64,
    }
}

fn run_one(config: &EstimatorConfig, pmf: &Pmf, truth: f64, seed: u64, index: u64) -> TrialRecord {
    let trial_seed = trial_seed(seed, index);
    match run_trial(config, pmf, trial_seed) {
        Ok(o) => {
            let estimate = round12(o.estimate);
            TrialRecord {
                index,
                seed: trial_seed,
                estimate: Some(estimate),
                abs_error: Some(round12((o.estimate - truth).abs())),
                samples_consumed: Some(o.samples_consumed),
                registers_high_water: Some(o.registers_high_water),
                degenerate_intervals: o.degenerate_intervals,
                error: None,
            }
        }
        Err(e) => TrialRecord {
            index,
            seed: trial_seed,
            estimate: None,
            abs_error: None,
            samples_consumed: None,
            registers_high_water: None,
            degenerate_intervals: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Runs every trial of `config` (concurrently when `workers != 1`) and
/// assembles the report. The result depends only on the configuration.
pub fn run_report(config: &RunConfig) -> Result<RunReport> {
    let estimator = config.estimator_config()?;
    let pmf = config.family_spec().materialize()?;
    let truth = exact_entropy(&pmf);
    let run_all = || -> Vec<TrialRecord> {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_one(&estimator, &pmf, truth, config.seed, i))
            .collect()
    };
    let trials = if config.workers == 0 {
        run_all()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?
            .install(run_all)
    };
    let aggregates = aggregate(&trials, config.eps);
    Ok(RunReport {
        schema: REPORT_SCHEMA.to_string(),
        config: config.clone(),
        units: "nats".to_string(),
        true_entropy: round12(truth),
        predicted_worst_case_samples: estimator.worst_case_samples(),
        trials,
        aggregates,
    })
}
