use streaming_entropy::bench::config::{Mode, RunConfig};
use streaming_entropy::bench::params::params_table;
use streaming_entropy::{theory_constant_check, EstimatorKind};

fn main() -> streaming_entropy::Result<()> {
    let (beta, c_t) = (17.0, 30.0);
    let c_r = 6.0 * c_t * c_t * (beta + 1.0f64).powf(2.5);
    for c in theory_constant_check(beta, beta / 2.0, 2000.0, c_r, c_t) {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    println!();

    // beta = 17 leaves no room for a partition at any reachable k
    let mut cfg = RunConfig {
        k: 1_000_000,
        estimator: EstimatorKind::General,
        mode: Mode::TheoryPrint,
        ..Default::default()
    };
    cfg.constants.beta = beta;
    print!("{}", params_table(&cfg)?);
    Ok(())
}
