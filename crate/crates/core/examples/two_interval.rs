//! The two-interval estimator, with its intermediate quantities.

use streaming_entropy::{
    exact_entropy, run_two_interval, two_interval_params, Family, FamilySpec, RegisterFile,
    SymbolStream, TwoIntervalConstants,
};

fn main() -> streaming_entropy::Result<()> {
    let k = 1000;
    let eps = 0.5;
    let consts = TwoIntervalConstants {
        c1: 2.0,
        c2: 2.0,
        ..Default::default()
    };
    let params = two_interval_params(k, eps, &consts)?;
    println!(
        "ell = {:.5}  N1 = {}  R1 = {}  N2 = {}  R2 = {}",
        params.ell, params.n1, params.r1, params.n2, params.r2
    );

    let p = FamilySpec::new(
        Family::TwoLevel {
            head_mass: 0.5,
            head_count: 8,
        },
        k,
    )
    .materialize()?;
    let mut stream = SymbolStream::seeded(&p, 2024);
    let mut rf = RegisterFile::default();
    let run = run_two_interval(&mut stream, &params, &mut rf)?;

    println!("p_hat(I1)     {:.4}", run.p_hat);
    println!(
        "H_bar         {:.4} / {:.4}",
        run.cond.h_bar[0], run.cond.h_bar[1]
    );
    println!("matched       {:?}", run.cond.hits);
    println!("estimate      {:.4}", run.estimate);
    println!("true entropy  {:.4}", exact_entropy(&p));
    println!(
        "samples       {} of at most {}",
        stream.consumed(),
        params.worst_case_samples()
    );
    if !run.degenerate_intervals().is_empty() {
        println!("no rounds landed in {:?}", run.degenerate_intervals());
    }
    Ok(())
}
