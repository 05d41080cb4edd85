//! Iterated-logarithm partitions and the general estimator.

use streaming_entropy::bench::config::Constants;
use streaming_entropy::{
    build_partition, exact_entropy, general_params, log_star, run_general, Family, FamilySpec,
    RegisterFile, SymbolStream,
};

fn main() -> streaming_entropy::Result<()> {
    for k in [16usize, 1024, 1_000_000] {
        let part = build_partition(k, 2.0)?;
        println!(
            "k = {k:>8}  log* k = {}  boundaries {:?}",
            log_star(k as f64),
            part.h
        );
    }

    let k = 1024;
    let params = general_params(k, 0.5, &Constants::default().general())?;
    for i in 1..=params.t() {
        println!(
            "interval {i}: [{:.6}, {:.6})  N = {:>5}  R = {:>4}",
            params.partition.lower(i),
            params.partition.upper(i),
            params.window(i),
            params.rounds(i)
        );
    }

    let p = FamilySpec::new(Family::Geometric { r: 0.01 }, k).materialize()?;
    let mut stream = SymbolStream::seeded(&p, 7);
    let mut rf = RegisterFile::default();
    let run = run_general(&mut stream, &params, &mut rf)?;
    println!("p_hat {:?}", run.p_hat);
    println!(
        "estimate {:.4}, truth {:.4}",
        run.estimate,
        exact_entropy(&p)
    );
    println!("registers {}", rf.high_water());
    Ok(())
}
