//! A single seeded estimator run with its accounting.

use serde::{Deserialize, Serialize};

use crate::dist::Pmf;
use crate::error::Result;
use crate::general::{run_general, GeneralParams};
use crate::oracles::plug_in_estimate;
use crate::simple::{run_simple, SimpleParams};
use crate::stream::{RegisterFile, SymbolStream, WORD_BUDGET};
use crate::two_interval::{run_two_interval, TwoIntervalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Simple,
    TwoInterval,
    General,
    PlugIn,
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EstimatorKind::Simple => "simple",
            EstimatorKind::TwoInterval => "two-interval",
            EstimatorKind::General => "general",
            EstimatorKind::PlugIn => "plug-in",
        })
    }
}

/// A fully parameterized estimator.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorConfig {
    Simple(SimpleParams),
    TwoInterval(TwoIntervalParams),
    General(GeneralParams),
    /// Empirical-distribution baseline over `n` samples of a `k`-ary source.
    PlugIn {
        k: usize,
        n: u64,
    },
}

impl EstimatorConfig {
    pub fn kind(&self) -> EstimatorKind {
        match self {
            EstimatorConfig::Simple(_) => EstimatorKind::Simple,
            EstimatorConfig::TwoInterval(_) => EstimatorKind::TwoInterval,
            EstimatorConfig::General(_) => EstimatorKind::General,
            EstimatorConfig::PlugIn { .. } => EstimatorKind::PlugIn,
        }
    }

    /// Upper bound on samples a run can consume.
    pub fn worst_case_samples(&self) -> u64 {
        match self {
            EstimatorConfig::Simple(p) => p.samples(),
            EstimatorConfig::TwoInterval(p) => p.worst_case_samples(),
            EstimatorConfig::General(p) => p.worst_case_samples(),
            EstimatorConfig::PlugIn { n, .. } => *n,
        }
    }

    /// Register capacity a run is given. The streaming estimators get the
    /// fixed word budget; the plug-in baseline needs one counter per symbol.
    pub fn register_capacity(&self) -> usize {
        match self {
            EstimatorConfig::PlugIn { k, .. } => k + 2,
            _ => WORD_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub estimate: f64,
    pub samples_consumed: u64,
    pub registers_high_water: usize,
    /// 1-based intervals with no matched round.
    pub degenerate_intervals: Vec<usize>,
}

/// Runs `config` once against a fresh stream from `pmf` seeded with `seed`.
pub fn run_trial(config: &EstimatorConfig, pmf: &Pmf, seed: u64) -> Result<TrialOutcome> {
    let mut stream = SymbolStream::seeded(pmf, seed);
    let mut rf = RegisterFile::new(config.register_capacity());
    let (estimate, degenerate_intervals) = match config {
        EstimatorConfig::Simple(p) => (run_simple(&mut stream, p, &mut rf)?, Vec::new()),
        EstimatorConfig::TwoInterval(p) => {
            let run = run_two_interval(&mut stream, p, &mut rf)?;
            (run.estimate, run.degenerate_intervals())
        }
        EstimatorConfig::General(p) => {
            let run = run_general(&mut stream, p, &mut rf)?;
            (run.estimate, run.degenerate_intervals())
        }
        EstimatorConfig::PlugIn { k, n } => {
            (plug_in_estimate(&mut stream, *k, *n, &mut rf)?, Vec::new())
        }
    };
    Ok(TrialOutcome {
        estimate,
        samples_consumed: stream.consumed(),
        registers_high_water: rf.high_water(),
        degenerate_intervals,
    })
}
