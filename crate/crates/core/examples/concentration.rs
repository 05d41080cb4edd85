//! Hoeffding-type bounds next to Monte Carlo deviation frequencies.

use streaming_entropy::oracles::random_hoeffding_frequency;
use streaming_entropy::{concentration_bound, random_hoeffding_bound, simple_params};

fn main() -> streaming_entropy::Result<()> {
    println!("random Hoeffding, range [0, 1], 10000 repetitions");
    println!(
        "{:>5} {:>5} {:>5} {:>10} {:>10}",
        "m", "p", "t", "observed", "bound"
    );
    for m in [100u64, 800] {
        for p in [0.1, 0.5, 1.0] {
            for t in [0.05, 0.1] {
                let f = random_hoeffding_frequency(m, p, t, 10_000, 17)?;
                let b = random_hoeffding_bound(m, p, t, 0.0, 1.0);
                println!("{m:>5} {p:>5} {t:>5} {f:>10.4} {b:>10.4}");
            }
        }
    }

    let params = simple_params(8, 0.25)?;
    let b = concentration_bound(params.r, params.n as f64, 0.125);
    println!();
    println!(
        "simple estimator, k = 8: Pr(|mean - E| >= 0.125) <= {b:.4} with R = {}",
        params.r
    );
    Ok(())
}
