//! Sample cost and accuracy across eps for every estimator, as CSV.
//!
//!     cargo run --release --example sweep_csv > sweep.csv

use streaming_entropy::bench::config::RunConfig;
use streaming_entropy::bench::sweep::{run_sweep, write_csv, SweepGrid};
use streaming_entropy::{EstimatorKind, Family};

fn main() -> streaming_entropy::Result<()> {
    let grid = SweepGrid {
        ks: vec![64],
        eps: vec![1.0, 0.75, 0.5],
        estimators: vec![
            EstimatorKind::Simple,
            EstimatorKind::TwoInterval,
            EstimatorKind::General,
            EstimatorKind::PlugIn,
        ],
        base: RunConfig {
            family: Family::Zipf { s: 1.0 },
            trials: 40,
            seed: 11,
            ..Default::default()
        },
    };
    let rows = run_sweep(&grid)?;
    write_csv(&rows, std::io::stdout())
}
