//! Exact small-instance oracles, concentration-bound evaluators, the
//! plug-in baseline and the Monte Carlo success harness.

use rayon::prelude::*;

use crate::dist::{exact_entropy, Pmf};
use crate::error::{Error, Result};
use crate::general::GeneralParams;
use crate::numeric::{compensated_sum, trial_seed, CompensatedSum, LnFactorials};
use crate::stream::{RegisterFile, SymbolStream};
use crate::trial::{run_trial, EstimatorConfig};

/// Largest number of binomial terms an oracle will enumerate.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

fn guard(terms: u64) -> Result<()> {
    if terms > ENUMERATION_LIMIT {
        return Err(Error::InstanceTooLarge {
            terms,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// `E[1/(X+1)]` for `X ~ Bin(m, r)`, in closed form
/// `(1 - (1-r)^(m+1)) / (r (m+1))`.
///
/// `r = 0` is rejected: the expectation is then 1, but the closed form is
/// `0/0`.
pub fn binom_recip_expectation(m: u64, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::Domain(
            "r = 0: closed form degenerates (the limit value is 1)".into(),
        ));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("r = {r} outside (0, 1]")));
    }
    let m1 = (m + 1) as f64;
    // 1 - (1-r)^(m+1), accurate for small r
    let numer = -((m1 * (-r).ln_1p()).exp_m1());
    Ok(numer / (r * m1))
}

/// Exact `E[ln(N/(N_x+1))]` averaged over `x ~ p`, i.e. the mean of the
/// one-interval estimator with window `n`.
pub fn exact_mean_simple(p: &Pmf, n: u64) -> Result<f64> {
    guard(p.k() as u64 * (n + 1))?;
    let lf = LnFactorials::up_to(n);
    let logs: Vec<f64> = (0..=n).map(|c| (n as f64 / (c + 1) as f64).ln()).collect();
    let mut total = CompensatedSum::new();
    for &q in p.probs().iter().filter(|&&q| q > 0.0) {
        let inner = compensated_sum((0..=n).map(|c| lf.binomial_pmf(n, c, q) * logs[c as usize]));
        total.add(q * inner);
    }
    Ok(total.value())
}

/// Exact conditional output distribution `p_A(I_j | x)` of a randomized
/// interval classifier. Rows are symbols, columns intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    cond: Vec<Vec<f64>>,
}

impl ClassifierModel {
    /// Validates that every row is a distribution (within 1e-12).
    pub fn new(cond: Vec<Vec<f64>>) -> Result<Self> {
        let width = cond.first().map(Vec::len).unwrap_or(0);
        if width == 0 {
            return Err(Error::InvalidParameter("classifier model is empty".into()));
        }
        for (x, row) in cond.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidParameter(format!("row {x} has wrong width")));
            }
            if row.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "row {x} has a negative entry"
                )));
            }
            let s = compensated_sum(row.iter().copied());
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::NormalizationFailure {
                    sum: s,
                    tolerance: 1e-12,
                });
            }
        }
        Ok(Self { cond })
    }

    /// Every symbol goes to interval `j` (0-based) of `intervals`.
    pub fn deterministic(k: usize, intervals: usize, j: usize) -> Self {
        let mut row = vec![0.0; intervals];
        row[j] = 1.0;
        Self { cond: vec![row; k] }
    }

    pub fn symbols(&self) -> usize {
        self.cond.len()
    }

    pub fn intervals(&self) -> usize {
        self.cond[0].len()
    }

    /// `p_A(I_j | x)`, 0-based `j`.
    pub fn cond(&self, x: usize, j: usize) -> f64 {
        self.cond[x][j]
    }

    /// `p_A(I_j) = sum_x p(x) p_A(I_j | x)`.
    pub fn masses(&self, p: &Pmf) -> Vec<f64> {
        (0..self.intervals())
            .map(|j| compensated_sum((0..p.k()).map(|x| p.prob(x) * self.cond[x][j])))
            .collect()
    }
}

fn upper_tail(lf: &LnFactorials, n: u64, q: f64, threshold: f64) -> f64 {
    // Pr[Bin(n, q) >= threshold]
    compensated_sum(
        (0..=n)
            .filter(|&c| c as f64 >= threshold)
            .map(|c| lf.binomial_pmf(n, c, q)),
    )
}

/// Exact model of the two-interval classifier:
/// `p_A(I_1 | x) = Pr[Bin(N, p(x)) >= N ell]`.
pub fn exact_estint_probs(p: &Pmf, n: u64, ell: f64) -> Result<ClassifierModel> {
    guard(p.k() as u64 * (n + 1))?;
    let lf = LnFactorials::up_to(n);
    let cond = p
        .probs()
        .iter()
        .map(|&q| {
            let hit = upper_tail(&lf, n, q, n as f64 * ell).min(1.0);
            vec![hit, 1.0 - hit]
        })
        .collect();
    ClassifierModel::new(cond)
}

/// Exact model of the general classifier: the first interval `i < T` whose
/// window reaches its threshold, else `T`.
pub fn exact_genestint_probs(p: &Pmf, params: &GeneralParams) -> Result<ClassifierModel> {
    let t = params.t();
    let windows = &params.n[..t - 1];
    let terms: u64 = windows.iter().map(|n| n + 1).sum::<u64>() * p.k() as u64;
    guard(terms)?;
    let lf = LnFactorials::up_to(windows.iter().copied().max().unwrap_or(0));
    let cond = p
        .probs()
        .iter()
        .map(|&q| {
            let mut row = Vec::with_capacity(t);
            let mut miss_so_far = 1.0;
            for (i, &n) in windows.iter().enumerate() {
                let hit = upper_tail(&lf, n, q, n as f64 * params.partition.lower(i + 1)).min(1.0);
                row.push(miss_so_far * hit);
                miss_so_far *= 1.0 - hit;
            }
            let assigned = compensated_sum(row.iter().copied());
            row.push((1.0 - assigned).max(0.0));
            row
        })
        .collect();
    ClassifierModel::new(cond)
}

/// Per-interval conditional entropies and classifier masses.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `H_j = E_{X ~ p_A(x | I_j)}[-ln p(X)]`; `None` when `p_A(I_j) = 0`.
    pub per_interval: Vec<Option<f64>>,
    pub masses: Vec<f64>,
    /// `sum_j p_A(I_j) H_j`; zero-mass intervals contribute nothing.
    pub recombined: f64,
}

pub fn decompose_entropy(p: &Pmf, model: &ClassifierModel) -> Result<Decomposition> {
    if model.symbols() != p.k() {
        return Err(Error::InvalidParameter(format!(
            "model covers {} symbols, pmf has {}",
            model.symbols(),
            p.k()
        )));
    }
    let masses = model.masses(p);
    let per_interval: Vec<Option<f64>> = (0..model.intervals())
        .map(|j| {
            if masses[j] <= 0.0 {
                return None;
            }
            let weighted = compensated_sum(
                p.probs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &q)| q > 0.0)
                    .map(|(x, &q)| q * model.cond(x, j) * -q.ln()),
            );
            Some(weighted / masses[j])
        })
        .collect();
    let recombined = compensated_sum(
        masses
            .iter()
            .zip(&per_interval)
            .filter_map(|(m, h)| h.map(|h| m * h)),
    );
    Ok(Decomposition {
        per_interval,
        masses,
        recombined,
    })
}

/// Hoeffding: for independent `X_i in [a_i, b_i]`,
/// `Pr(|mean - E mean| >= t) <= 2 exp(-2 (m t)^2 / sum (b_i - a_i)^2)`.
/// `ranges` holds one range per variable, or a single range shared by all.
pub fn hoeffding_bound(m: u64, ranges: &[(f64, f64)], t: f64) -> f64 {
    assert!(m >= 1, "need at least one variable");
    let widths: f64 = match ranges {
        [(a, b)] => m as f64 * (b - a).powi(2),
        _ => {
            assert_eq!(ranges.len() as u64, m, "one range per variable");
            ranges.iter().map(|(a, b)| (b - a).powi(2)).sum()
        }
    };
    let mt = m as f64 * t;
    (2.0 * (-2.0 * mt * mt / widths).exp()).min(1.0)
}

/// Hoeffding with a `Bin(m, p)` number of terms, each in `[a, b]`:
/// `Pr(|mean - E mean| >= t/p) <= 3 exp(-m t^2 / (8 p (b-a)^2))`.
pub fn random_hoeffding_bound(m: u64, p: f64, t: f64, a: f64, b: f64) -> f64 {
    let w = b - a;
    (3.0 * (-(m as f64) * t * t / (8.0 * p * w * w)).exp()).min(1.0)
}

/// Monte Carlo frequency of the random-Hoeffding event
/// `|X - E X| >= t/p`, where `M ~ Bin(m, p)` and `X` is the mean of `M`
/// fair coin flips in `[0, 1]`. A draw with `M = 0` has no mean and is
/// counted as a deviation.
pub fn random_hoeffding_frequency(m: u64, p: f64, t: f64, reps: u64, seed: u64) -> Result<f64> {
    use rand::SeedableRng;
    use rand_distr::{Binomial, Distribution};
    let count_m = Binomial::new(m, p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let deviations: u64 = (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = crate::stream::RandomSource::seed_from_u64(trial_seed(seed, i));
            let draws = count_m.sample(&mut rng);
            if draws == 0 {
                return 1;
            }
            let heads = Binomial::new(draws, 0.5).unwrap().sample(&mut rng);
            let mean = heads as f64 / draws as f64;
            u64::from((mean - 0.5).abs() >= t / p)
        })
        .sum();
    Ok(deviations as f64 / reps as f64)
}

/// Entropy of the empirical distribution of `n` fresh samples. Keeps one
/// counter register per symbol, so it needs a register file of capacity at
/// least `k + 2`.
pub fn plug_in_estimate(
    stream: &mut SymbolStream<'_>,
    k: usize,
    n: u64,
    rf: &mut RegisterFile,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("plug-in needs n >= 1".into()));
    }
    let counts = (0..k)
        .map(|_| rf.alloc_int(0))
        .collect::<Result<Vec<_>>>()?;
    let j = rf.alloc_int(0)?;
    let x = rf.alloc_int(0)?;
    while rf.int(j) < n {
        rf.set_int(x, stream.next_symbol() as u64);
        rf.incr(counts[rf.int(x) as usize]);
        rf.incr(j);
    }
    let nf = n as f64;
    let h = compensated_sum(
        counts
            .iter()
            .map(|&r| rf.int(r))
            .filter(|&c| c > 0)
            .map(|c| {
                let f = c as f64 / nf;
                -f * f.ln()
            }),
    );
    rf.free(x);
    rf.free(j);
    for r in counts {
        rf.free(r);
    }
    Ok(h)
}

/// Sample size used for the plug-in baseline: `ceil(10 k / eps)`.
pub fn plug_in_samples(k: usize, eps: f64) -> u64 {
    (10.0 * k as f64 / eps).ceil() as u64
}

/// Fraction of `trials` independent runs whose estimate lands within `eps`
/// of `H(p)`. Trial `i` is seeded with `trial_seed(seed, i)`; a trial that
/// fails (e.g. exceeds its register budget) counts as a miss.
pub fn monte_carlo_success(
    config: &EstimatorConfig,
    p: &Pmf,
    eps: f64,
    trials: u64,
    seed: u64,
) -> f64 {
    assert!(trials >= 1, "need at least one trial");
    let truth = exact_entropy(p);
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| match run_trial(config, p, trial_seed(seed, i)) {
            Ok(o) if (o.estimate - truth).abs() <= eps => 1,
            _ => 0,
        })
        .sum();
    hits as f64 / trials as f64
}
