//! Exact small-instance quantities: the binomial reciprocal, the exact
//! mean of the simple estimator, and the per-interval entropy split.

use streaming_entropy::{
    bias_bound, binom_recip_expectation, decompose_entropy, exact_entropy, exact_estint_probs,
    exact_mean_simple, Pmf,
};

fn main() -> streaming_entropy::Result<()> {
    println!(
        "E[1/(X+1)], X ~ Bin(10, 0.3) = {:.15}",
        binom_recip_expectation(10, 0.3)?
    );

    let p = Pmf::new(vec![0.5, 0.25, 0.125, 0.125])?;
    let h = exact_entropy(&p);
    println!("H(p) = {h:.12}");
    println!("{:>4} {:>14} {:>14} {:>8}", "N", "mean", "bias", "k/N");
    for n in [2, 8, 32, 64, 256] {
        let mean = exact_mean_simple(&p, n)?;
        println!(
            "{n:>4} {mean:>14.10} {:>14.10} {:>8.4}",
            h - mean,
            bias_bound(p.k(), n)
        );
    }

    let model = exact_estint_probs(&p, 4, 0.3)?;
    let d = decompose_entropy(&p, &model)?;
    println!("interval masses  {:?}", d.masses);
    println!("per interval     {:?}", d.per_interval);
    println!("recombined - H   {:e}", d.recombined - h);
    Ok(())
}
