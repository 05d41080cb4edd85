use rayon::prelude::*;
use streaming_entropy::{Family, FamilySpec, SymbolStream};

#[test]
fn empirical_frequencies_converge() {
    let n = 1_000_000u64;
    for family in [Family::Zipf { s: 1.0 }, Family::Geometric { r: 0.3 }] {
        let p = FamilySpec::new(family.clone(), 10).materialize().unwrap();
        let good = (0..100u64)
            .into_par_iter()
            .filter(|&seed| {
                let mut counts = [0u64; 10];
                let mut stream = SymbolStream::seeded(&p, seed);
                for _ in 0..n {
                    counts[stream.next_symbol()] += 1;
                }
                counts.iter().zip(p.probs()).all(|(&c, &q)| {
                    let sd = (q * (1.0 - q) / n as f64).sqrt();
                    (c as f64 / n as f64 - q).abs() <= 4.0 * sd + 1e-9
                })
            })
            .count();
        assert!(good >= 99, "{family}: {good}/100 runs within 4 sd");
    }
}
