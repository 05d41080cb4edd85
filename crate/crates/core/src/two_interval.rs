//! Two-interval estimator.
//!
//! `[0, 1]` is split at `ell = (ln k)^beta / k`. A randomized classifier
//! ([`est_int`]) guesses which side of the split a symbol's probability lies
//! on; [`est_prob_int`] estimates how often it answers `I1`; [`cond_exp`]
//! estimates the conditional expectation of `ln(1/p(X))` given each answer,
//! clipping interval-2 values from below at `ln(1/(4 ell))`. The estimate is
//! the mixture of the two conditional means.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::{count_in_window, RegisterFile, SymbolStream};

/// Output of the two-interval classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    I1,
    I2,
}

/// Tunable constants of the two-interval parameter formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoIntervalConstants {
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for TwoIntervalConstants {
    /// Practical defaults: `beta = 2`, `C1 = C2 = 1`.
    fn default() -> Self {
        Self {
            beta: 2.0,
            c1: 1.0,
            c2: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoIntervalParams {
    pub k: usize,
    pub eps: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Split point between `I2 = [0, ell)` and `I1 = [ell, 1]`.
    pub ell: f64,
    /// Classifier window; equal to `n1`.
    pub n: u64,
    /// Rounds used to estimate the `I1` frequency; equal to `r1`.
    pub r: u64,
    pub n1: u64,
    pub r1: u64,
    pub n2: u64,
    pub r2: u64,
    pub c1: f64,
    pub c2: f64,
}

pub(crate) fn ceil_count(v: f64) -> u64 {
    (v.ceil() as u64).max(1)
}

/// Builds the parameter set:
/// `N = N1 = C1 k / (eps (ln k)^gamma)`, `R = R1 = C2 ln^2(k/eps) / eps^2`,
/// `N2 = C1 k / eps`, `R2 = C2 ln^2(ln k / eps) / eps^2`, with
/// `gamma = beta / 2`, all rounded up.
pub fn two_interval_params(
    k: usize,
    eps: f64,
    constants: &TwoIntervalConstants,
) -> Result<TwoIntervalParams> {
    let TwoIntervalConstants { beta, c1, c2 } = *constants;
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "two-interval estimator needs k >= 2, got {k}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps must be > 0, got {eps}"
        )));
    }
    if !(beta > 0.0 && c1 > 0.0 && c2 > 0.0) {
        return Err(Error::InvalidParameter(
            "beta, C1 and C2 must be positive".into(),
        ));
    }
    let kf = k as f64;
    let ln_k = kf.ln();
    let ell = ln_k.powf(beta) / kf;
    if !(ell > 0.0 && ell < 1.0) {
        return Err(Error::VacuousPartition(format!(
            "split point (ln k)^beta / k = {ell} is not inside (0, 1) for k = {k}, beta = {beta}"
        )));
    }
    let gamma = beta / 2.0;
    let n1 = ceil_count(c1 * kf / (eps * ln_k.powf(gamma)));
    let r1 = ceil_count(c2 * (kf / eps).ln().powi(2) / (eps * eps));
    let n2 = ceil_count(c1 * kf / eps);
    let r2 = ceil_count(c2 * (ln_k / eps).ln().powi(2) / (eps * eps));
    Ok(TwoIntervalParams {
        k,
        eps,
        beta,
        gamma,
        ell,
        n: n1,
        r: r1,
        n1,
        r1,
        n2,
        r2,
        c1,
        c2,
    })
}

impl TwoIntervalParams {
    /// Worst-case consumption: every round of every phase draws one symbol
    /// and runs the classifier; every conditional round also fills its
    /// counting window.
    pub fn worst_case_samples(&self) -> u64 {
        self.n * self.r
            + self.r1 * (self.n + self.n1)
            + self.r2 * (self.n + self.n2)
            + (self.r + self.r1 + self.r2)
    }

    /// Clip floor for interval-2 values, `ln(1/(4 ell))`.
    pub fn clip_floor(&self) -> f64 {
        (1.0 / (4.0 * self.ell)).ln()
    }
}

/// Draws `n` samples and answers `I1` iff `x` appears at least `n * ell`
/// times (real-valued threshold, inclusive).
pub fn est_int(
    stream: &mut SymbolStream<'_>,
    x: usize,
    n: u64,
    ell: f64,
    rf: &mut RegisterFile,
) -> Result<Interval> {
    let c = count_in_window(stream, x, n, rf)?;
    Ok(if c as f64 >= n as f64 * ell {
        Interval::I1
    } else {
        Interval::I2
    })
}

/// Fraction of `r` fresh symbols that [`est_int`] places in `I1`.
pub fn est_prob_int(
    stream: &mut SymbolStream<'_>,
    n: u64,
    r: u64,
    ell: f64,
    rf: &mut RegisterFile,
) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidParameter("R must be positive".into()));
    }
    let t = rf.alloc_int(0)?;
    let x = rf.alloc_int(0)?;
    let hits = rf.alloc_int(0)?;
    while rf.int(t) < r {
        rf.set_int(x, stream.next_symbol() as u64);
        if est_int(stream, rf.int(x) as usize, n, ell, rf)? == Interval::I1 {
            rf.incr(hits);
        }
        rf.incr(t);
    }
    let frac = rf.int(hits) as f64 / r as f64;
    for reg in [hits, x, t] {
        rf.free(reg);
    }
    Ok(frac)
}

/// Conditional means produced by [`cond_exp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondExpOutput {
    /// `H̄_1, H̄_2`; zero for a degenerate interval.
    pub h_bar: [f64; 2],
    /// Number of rounds whose symbol the classifier matched, per interval.
    pub hits: [u64; 2],
    /// Set when no round matched, so the mean is undefined.
    pub degenerate: [bool; 2],
}

pub fn cond_exp(
    stream: &mut SymbolStream<'_>,
    params: &TwoIntervalParams,
    rf: &mut RegisterFile,
) -> Result<CondExpOutput> {
    cond_exp_observed(stream, params, rf, |_, _| {})
}

/// As [`cond_exp`], reporting `(interval, value)` for every accumulated
/// per-round value. Interval 1 is processed fully before interval 2.
pub fn cond_exp_observed(
    stream: &mut SymbolStream<'_>,
    params: &TwoIntervalParams,
    rf: &mut RegisterFile,
    mut observe: impl FnMut(Interval, f64),
) -> Result<CondExpOutput> {
    let mut out = CondExpOutput {
        h_bar: [0.0; 2],
        hits: [0; 2],
        degenerate: [false; 2],
    };
    let floor = params.clip_floor();
    for (slot, interval) in [Interval::I1, Interval::I2].into_iter().enumerate() {
        let (window, rounds) = match interval {
            Interval::I1 => (params.n1, params.r1),
            Interval::I2 => (params.n2, params.r2),
        };
        let t = rf.alloc_int(0)?;
        let x = rf.alloc_int(0)?;
        let matched = rf.alloc_int(0)?;
        let acc = rf.alloc_real(0.0)?;
        while rf.int(t) < rounds {
            rf.set_int(x, stream.next_symbol() as u64);
            let sym = rf.int(x) as usize;
            if est_int(stream, sym, params.n, params.ell, rf)? == interval {
                rf.incr(matched);
                let c = count_in_window(stream, sym, window, rf)?;
                let mut v = (window as f64 / (c + 1) as f64).ln();
                if interval == Interval::I2 {
                    v = v.max(floor);
                }
                observe(interval, v);
                rf.add_real(acc, v);
            }
            rf.incr(t);
        }
        let s = rf.int(matched);
        out.hits[slot] = s;
        if s == 0 {
            out.degenerate[slot] = true;
        } else {
            out.h_bar[slot] = rf.real(acc) / s as f64;
        }
        for reg in [acc, matched, x, t] {
            rf.free(reg);
        }
    }
    Ok(out)
}

/// Everything a two-interval run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoIntervalRun {
    pub estimate: f64,
    /// Estimated `I1` frequency.
    pub p_hat: f64,
    pub cond: CondExpOutput,
}

impl TwoIntervalRun {
    /// Samples the run consumed, reconstructed from its match counts.
    pub fn samples(&self, params: &TwoIntervalParams) -> u64 {
        params.r * (1 + params.n)
            + params.r1 * (1 + params.n)
            + self.cond.hits[0] * params.n1
            + params.r2 * (1 + params.n)
            + self.cond.hits[1] * params.n2
    }

    /// 1-based indices of intervals that no round matched.
    pub fn degenerate_intervals(&self) -> Vec<usize> {
        (0..2)
            .filter(|&i| self.cond.degenerate[i])
            .map(|i| i + 1)
            .collect()
    }
}

pub fn run_two_interval(
    stream: &mut SymbolStream<'_>,
    params: &TwoIntervalParams,
    rf: &mut RegisterFile,
) -> Result<TwoIntervalRun> {
    let p_reg = rf.alloc_real(0.0)?;
    let p_hat = est_prob_int(stream, params.n, params.r, params.ell, rf)?;
    rf.set_real(p_reg, p_hat);
    let cond = cond_exp(stream, params, rf)?;
    let est = rf.alloc_real(0.0)?;
    let p = rf.real(p_reg);
    rf.set_real(est, p * cond.h_bar[0]);
    rf.add_real(est, (1.0 - p) * cond.h_bar[1]);
    let estimate = rf.real(est);
    rf.free(est);
    rf.free(p_reg);
    Ok(TwoIntervalRun {
        estimate,
        p_hat,
        cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Family, FamilySpec, Pmf};

    fn replay_with_count(x: usize, count: usize, n: usize) -> SymbolStream<'static> {
        let mut v = vec![x; count];
        v.resize(n, x + 1);
        SymbolStream::replay(v)
    }

    fn small_params() -> TwoIntervalParams {
        TwoIntervalParams {
            k: 4,
            eps: 0.5,
            beta: 2.0,
            gamma: 1.0,
            ell: 0.3,
            n: 6,
            r: 20,
            n1: 6,
            r1: 20,
            n2: 9,
            r2: 15,
            c1: 1.0,
            c2: 1.0,
        }
    }

    #[test]
    fn threshold_is_inclusive() {
        let mut rf = RegisterFile::default();
        let mut s = replay_with_count(0, 5, 100);
        assert_eq!(
            est_int(&mut s, 0, 100, 0.05, &mut rf).unwrap(),
            Interval::I1
        );
        assert_eq!(s.consumed(), 100);
        let mut s = replay_with_count(0, 4, 100);
        assert_eq!(
            est_int(&mut s, 0, 100, 0.05, &mut rf).unwrap(),
            Interval::I2
        );
    }

    #[test]
    fn dirac_cases() {
        let p = FamilySpec::new(Family::Dirac, 4).materialize().unwrap();
        let params = small_params();
        let mut rf = RegisterFile::default();
        let mut s = SymbolStream::seeded(&p, 3);
        assert_eq!(est_prob_int(&mut s, 6, 20, 0.3, &mut rf).unwrap(), 1.0);
        assert_eq!(s.consumed(), 20 * 7);

        let mut s = SymbolStream::seeded(&p, 3);
        let out = cond_exp(&mut s, &params, &mut rf).unwrap();
        assert_eq!(out.hits, [20, 0]);
        assert_eq!(out.degenerate, [false, true]);
        assert!((out.h_bar[0] - (6.0f64 / 7.0).ln()).abs() < 1e-12);
        assert_eq!(out.h_bar[1], 0.0);

        let mut s = SymbolStream::seeded(&p, 3);
        let run = run_two_interval(&mut s, &params, &mut rf).unwrap();
        assert!((run.estimate - (6.0f64 / 7.0).ln()).abs() < 1e-12);
        assert_eq!(run.degenerate_intervals(), vec![2]);
        assert_eq!(run.samples(&params), s.consumed());
        assert!(s.consumed() <= params.worst_case_samples());
        assert_eq!(rf.live(), 0);
        assert!(rf.high_water() <= 20);
    }

    #[test]
    fn prob_int_single_draw_window() {
        // with N = 1 a symbol is classified I1 iff the next draw repeats it,
        // so E[p̂] = sum p(x)^2 = 0.82
        let p = Pmf::new(vec![0.9, 0.1]).unwrap();
        let mut s = SymbolStream::seeded(&p, 8);
        let mut rf = RegisterFile::default();
        let est = est_prob_int(&mut s, 1, 100_000, 0.5, &mut rf).unwrap();
        assert!((est - 0.82).abs() < 0.01, "{est}");
        assert_eq!(s.consumed(), 200_000);
    }

    #[test]
    fn prob_int_lies_on_grid() {
        let p = FamilySpec::new(Family::Zipf { s: 1.0 }, 10)
            .materialize()
            .unwrap();
        let mut s = SymbolStream::seeded(&p, 1);
        let mut rf = RegisterFile::default();
        let v = est_prob_int(&mut s, 10, 7, 0.2, &mut rf).unwrap();
        let scaled = v * 7.0;
        assert!((scaled - scaled.round()).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn params_formula() {
        let p = two_interval_params(64, 0.5, &TwoIntervalConstants::default()).unwrap();
        let ln_k = 64f64.ln();
        assert!((p.ell - ln_k * ln_k / 64.0).abs() < 1e-15);
        assert_eq!(p.n, p.n1);
        assert_eq!(p.r, p.r1);
        assert_eq!(p.n1, (64.0 / (0.5 * ln_k)).ceil() as u64);
        assert_eq!(p.n2, 128);
        assert_eq!(p.gamma, 1.0);
        let theory = TwoIntervalConstants {
            beta: 17.0,
            ..Default::default()
        };
        assert!(matches!(
            two_interval_params(64, 0.5, &theory),
            Err(Error::VacuousPartition(_))
        ));
        assert!(two_interval_params(1, 0.5, &TwoIntervalConstants::default()).is_err());
    }

    #[test]
    fn clipped_values_stay_in_range() {
        let p = FamilySpec::new(Family::Zipf { s: 1.0 }, 64)
            .materialize()
            .unwrap();
        let params = two_interval_params(64, 0.5, &TwoIntervalConstants::default()).unwrap();
        let floor = params.clip_floor();
        let top = (params.n2 as f64).ln();
        let mut s = SymbolStream::seeded(&p, 12);
        let mut rf = RegisterFile::default();
        let mut seen = 0;
        cond_exp_observed(&mut s, &params, &mut rf, |i, v| {
            if i == Interval::I2 {
                seen += 1;
                assert!(v >= floor && v <= top + 1e-12, "{v}");
            }
        })
        .unwrap();
        assert!(seen > 0);
    }
}
