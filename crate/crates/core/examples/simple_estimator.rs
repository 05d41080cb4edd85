//! One run of the single-window estimator on a Zipf(1) source.
//!
//!     cargo run --example simple_estimator -- [k] [eps] [seed]

use streaming_entropy::{
    exact_entropy, run_simple, simple_params, Family, FamilySpec, RegisterFile, SymbolStream,
};

fn main() -> streaming_entropy::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let k: usize = args.first().map_or(8, |s| s.parse().expect("k"));
    let eps: f64 = args.get(1).map_or(0.25, |s| s.parse().expect("eps"));
    let seed: u64 = args.get(2).map_or(1, |s| s.parse().expect("seed"));

    let p = FamilySpec::new(Family::Zipf { s: 1.0 }, k).materialize()?;
    let params = simple_params(k, eps)?;
    println!(
        "N = {}, R = {}, samples = {}",
        params.n,
        params.r,
        params.samples()
    );

    let mut stream = SymbolStream::seeded(&p, seed);
    let mut rf = RegisterFile::default();
    let estimate = run_simple(&mut stream, &params, &mut rf)?;
    let truth = exact_entropy(&p);

    println!("estimate   {estimate:.6} nats");
    println!("true H(p)  {truth:.6} nats");
    println!("error      {:.6}", (estimate - truth).abs());
    println!(
        "consumed   {} samples, {} registers",
        stream.consumed(),
        rf.high_water()
    );
    Ok(())
}
