// Register high-water of each estimator against the plug-in baseline,
// as the alphabet grows.

use streaming_entropy::bench::config::{Constants, RunConfig};
use streaming_entropy::{run_trial, EstimatorKind, Family, FamilySpec, WORD_BUDGET};

fn main() -> streaming_entropy::Result<()> {
    let kinds = [
        EstimatorKind::Simple,
        EstimatorKind::TwoInterval,
        EstimatorKind::General,
        EstimatorKind::PlugIn,
    ];
    println!("word budget: {WORD_BUDGET}");
    print!("{:>6}", "k");
    for kind in kinds {
        print!("{:>14}", kind.to_string());
    }
    println!();
    for k in [8usize, 32, 128, 512] {
        let p = FamilySpec::new(Family::Uniform, k).materialize()?;
        print!("{k:>6}");
        for estimator in kinds {
            let cfg = RunConfig {
                k,
                eps: 1.0,
                estimator,
                constants: Constants::default(),
                ..Default::default()
            };
            let out = run_trial(&cfg.estimator_config()?, &p, 3)?;
            print!("{:>14}", out.registers_high_water);
        }
        println!();
    }
    Ok(())
}
