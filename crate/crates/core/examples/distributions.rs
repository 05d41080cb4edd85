//! The distribution families, their entropies and interval masses.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use streaming_entropy::{build_partition, interval_masses, Family, FamilySpec};

fn main() -> streaming_entropy::Result<()> {
    let k = 64;
    let families: Vec<Family> = [
        "uniform",
        "zipf:1",
        "geometric:0.1",
        "two-level:0.5:4",
        "dirac",
    ]
    .iter()
    .map(|s| s.parse())
    .collect::<Result<_, _>>()?;
    let thresholds = build_partition(k, 2.0)?.thresholds().to_vec();
    println!("interval boundaries for k = {k}: {thresholds:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for family in families {
        let p = FamilySpec::new(family.clone(), k).materialize()?;
        let draws: Vec<usize> = (0..8).map(|_| p.sample(&mut rng)).collect();
        println!(
            "{:<16} H = {:.4}  masses {:?}  draws {:?}",
            family.to_string(),
            p.entropy(),
            interval_masses(&p, &thresholds)?,
            draws
        );
    }
    Ok(())
}
