//! Property suites behind the `verify` subcommand.

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::dist::{exact_entropy, Family, FamilySpec, Pmf};
use crate::error::Result;
use crate::numeric::{compensated_sum, LnFactorials};
use crate::oracles::{
    binom_recip_expectation, decompose_entropy, exact_estint_probs, exact_mean_simple,
    hoeffding_bound, plug_in_samples, random_hoeffding_bound, random_hoeffding_frequency,
    ClassifierModel,
};
use crate::simple::{bias_bound, simple_params};
use crate::stream::{RandomSource, RegisterFile, SymbolStream, WORD_BUDGET};
use crate::trial::{run_trial, EstimatorConfig};
use crate::two_interval::est_prob_int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemmas,
    Memory,
    Decomposition,
    Concentration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Lemmas => Ok(vec![binom_recip_grid(), exact_bias_grid()?]),
        Suite::Memory => memory_suite(),
        Suite::Decomposition => Ok(vec![decomposition_suite(100, 7)?]),
        Suite::Concentration => concentration_suite(),
    }
}

/// `E[1/(X+1)]` by direct summation of the binomial pmf.
pub fn binom_recip_brute(m: u64, r: f64) -> f64 {
    let lf = LnFactorials::up_to(m);
    compensated_sum((0..=m).map(|c| lf.binomial_pmf(m, c, r) / (c + 1) as f64))
}

fn binom_recip_grid() -> Check {
    let mut worst = 0.0f64;
    let mut above_cap = 0;
    for m in 0..=30u64 {
        for j in 1..=99 {
            let r = j as f64 / 100.0;
            let closed = binom_recip_expectation(m, r).expect("r > 0");
            worst = worst.max((closed - binom_recip_brute(m, r)).abs());
            if closed > 1.0 / (r * (m + 1) as f64) {
                above_cap += 1;
            }
        }
    }
    Check::new(
        "binomial reciprocal closed form",
        worst <= 1e-12 && above_cap == 0,
        format!("max |closed - brute| = {worst:.3e}; {above_cap} values above 1/(r(m+1))"),
    )
}

/// Family grid shared by the bias checks: uniform, Zipf(1) and a two-level
/// pmf for every `k` in `1..=8` (two-level needs `k >= 2`).
pub fn bias_grid_pmfs() -> Result<Vec<(String, Pmf)>> {
    let mut out = Vec::new();
    for k in 1..=8usize {
        let mut families = vec![Family::Uniform, Family::Zipf { s: 1.0 }];
        if k >= 2 {
            families.push(Family::TwoLevel {
                head_mass: 0.6,
                head_count: 1,
            });
        }
        for f in families {
            let spec = FamilySpec::new(f, k);
            out.push((format!("{} k={k}", spec.family), spec.materialize()?));
        }
    }
    Ok(out)
}

fn exact_bias_grid() -> Result<Check> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (name, p) in bias_grid_pmfs()? {
        let h = exact_entropy(&p);
        for n in [2u64, 8, 32, 64] {
            let bias = h - exact_mean_simple(&p, n)?;
            cases += 1;
            if !(bias > 0.0 && bias <= bias_bound(p.k(), n)) {
                failures.push(format!("{name} N={n}: bias {bias}"));
            }
        }
    }
    Ok(Check::new(
        "exact bias in (0, k/N]",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{cases} cases")
        } else {
            failures.join("; ")
        },
    ))
}

fn memory_suite() -> Result<Vec<Check>> {
    let mut worst = 0usize;
    let mut runs = 0;
    let mut errors = Vec::new();
    let eps = 0.5;
    for k in [8usize, 64] {
        for family in [
            Family::Uniform,
            Family::Zipf { s: 1.0 },
            Family::TwoLevel {
                head_mass: 0.5,
                head_count: 2,
            },
        ] {
            let p = FamilySpec::new(family, k).materialize()?;
            let configs = [
                EstimatorConfig::Simple(simple_params(k, eps)?),
                EstimatorConfig::TwoInterval(crate::two_interval::two_interval_params(
                    k,
                    eps,
                    &Default::default(),
                )?),
                EstimatorConfig::General(crate::general::general_params(
                    k,
                    eps,
                    &crate::bench::config::Constants::default().general(),
                )?),
            ];
            for config in &configs {
                for seed in 0..3 {
                    runs += 1;
                    match run_trial(config, &p, seed) {
                        Ok(o) => worst = worst.max(o.registers_high_water),
                        Err(e) => errors.push(e.to_string()),
                    }
                }
            }
        }
    }
    let k = 32;
    let p = FamilySpec::new(Family::Uniform, k).materialize()?;
    let plug = run_trial(
        &EstimatorConfig::PlugIn {
            k,
            n: plug_in_samples(k, 1.0),
        },
        &p,
        0,
    )?;
    Ok(vec![
        Check::new(
            "streaming estimators stay within 20 registers",
            worst <= WORD_BUDGET && errors.is_empty(),
            format!("{runs} runs, high-water {worst}, {} errors", errors.len()),
        ),
        Check::new(
            "plug-in baseline exceeds 20 registers for k = 32",
            plug.registers_high_water > WORD_BUDGET,
            format!("high-water {}", plug.registers_high_water),
        ),
    ])
}

/// A pmf with random weights on `k` symbols; about one in four symbols
/// gets probability zero.
pub fn random_pmf<R: Rng>(rng: &mut R, k: usize) -> Pmf {
    let mut w: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random_bool(0.25) {
                0.0
            } else {
                rng.random::<f64>() + 1e-3
            }
        })
        .collect();
    if w.iter().all(|&v| v == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    Pmf::new(w.into_iter().map(|v| v / s).collect()).expect("normalized")
}

/// A random classifier with `intervals` outputs; rows are normalized so they
/// sum to one within rounding.
pub fn random_model<R: Rng>(rng: &mut R, k: usize, intervals: usize) -> ClassifierModel {
    let rows = (0..k)
        .map(|_| {
            let mut row: Vec<f64> = (0..intervals).map(|_| rng.random::<f64>()).collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
            let rest = compensated_sum(row[1..].iter().copied());
            row[0] = (1.0 - rest).max(0.0);
            row
        })
        .collect();
    ClassifierModel::new(rows).expect("rows normalized")
}

/// Largest `|recombined - H(p)|` over `pairs` random (pmf, classifier)
/// pairs, a third of them using the exact two-interval classifier with
/// window 1 or 2.
pub fn decomposition_max_error(pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = RandomSource::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..pairs {
        let k = rng.random_range(1..=8);
        let p = random_pmf(&mut rng, k);
        let model = match i % 3 {
            0 => {
                let n = 1 + (i as u64 / 3) % 2;
                exact_estint_probs(&p, n, rng.random_range(0.05..1.0))?
            }
            _ => {
                let intervals = rng.random_range(1..=4);
                random_model(&mut rng, k, intervals)
            }
        };
        let d = decompose_entropy(&p, &model)?;
        worst = worst.max((d.recombined - exact_entropy(&p)).abs());
    }
    Ok(worst)
}

fn decomposition_suite(pairs: usize, seed: u64) -> Result<Check> {
    let worst = decomposition_max_error(pairs, seed)?;
    Ok(Check::new(
        "entropy decomposition recombines exactly",
        worst <= 1e-12,
        format!("{pairs} pairs, max error {worst:.3e}"),
    ))
}

fn concentration_suite() -> Result<Vec<Check>> {
    let reps = 10_000u64;
    let mut violations = Vec::new();
    for m in [100u64, 800] {
        for p in [0.1, 0.5, 1.0] {
            for t in [0.05, 0.1] {
                let bound = random_hoeffding_bound(m, p, t, 0.0, 1.0);
                let freq = random_hoeffding_frequency(m, p, t, reps, m ^ t.to_bits())?;
                let sigma = (bound * (1.0 - bound) / reps as f64).sqrt();
                if freq > bound + 4.0 * sigma {
                    violations.push(format!("m={m} p={p} t={t}: {freq} > {bound}"));
                }
            }
        }
    }
    let rh = Check::new(
        "random Hoeffding bound holds empirically",
        violations.is_empty(),
        if violations.is_empty() {
            "12 grid points".into()
        } else {
            violations.join("; ")
        },
    );

    // p_hat from the two-interval classifier against its exact mean
    let p = FamilySpec::new(Family::Zipf { s: 1.0 }, 16).materialize()?;
    let (n, r, ell) = (8u64, 400u64, 0.2);
    let exact = exact_estint_probs(&p, n, ell)?.masses(&p)[0];
    let t = 0.1;
    let runs = 400u64;
    let mut deviations = 0;
    for seed in 0..runs {
        let mut stream = SymbolStream::seeded(&p, seed);
        let mut rf = RegisterFile::default();
        let p_hat = est_prob_int(&mut stream, n, r, ell, &mut rf)?;
        if (p_hat - exact).abs() >= t {
            deviations += 1;
        }
    }
    let freq = deviations as f64 / runs as f64;
    let bound = hoeffding_bound(r, &[(0.0, 1.0)], t);
    let sigma = (bound * (1.0 - bound) / runs as f64).sqrt();
    let ph = Check::new(
        "interval frequency estimate obeys Hoeffding",
        freq <= bound + 4.0 * sigma,
        format!("deviation frequency {freq} vs bound {bound:.3e}"),
    );
    Ok(vec![rh, ph])
}
