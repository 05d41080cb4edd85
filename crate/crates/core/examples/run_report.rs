//! Builds a run from a TOML document and prints the JSON report summary.

use streaming_entropy::bench::config::RunConfig;
use streaming_entropy::bench::report::run_report;

const CONFIG: &str = r#"
k = 8
eps = 0.25
estimator = "simple"
trials = 50
seed = 2024

[family]
kind = "zipf"
s = 1.0
"#;

fn main() -> streaming_entropy::Result<()> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let report = run_report(&cfg)?;
    let a = &report.aggregates;
    println!("true entropy        {}", report.true_entropy);
    println!(
        "predicted samples   {}",
        report.predicted_worst_case_samples
    );
    println!("success rate        {}", a.success_rate);
    println!("mean |error|        {:?}", a.mean_abs_error);
    println!("p90 |error|         {:?}", a.p90_abs_error);
    println!("max registers       {}", a.max_registers);

    if let Some(path) = std::env::args().nth(1) {
        report.write(path.as_ref()).expect("write report");
        println!("full report written to {path}");
    } else {
        let first = serde_json::to_string_pretty(&report.trials[0]).unwrap();
        println!("first trial record:\n{first}");
    }
    Ok(())
}
