//! General-interval estimator over an iterated-logarithm partition.
//!
//! With `T = log* k` intervals, interval `i` is
//! `[h[i], h[i-1])` where `h[0] = 1`, `h[T] = 0` and
//! `h[i] = (ln^(i) k)^beta / k` in between. The classifier
//! ([`gen_est_int`]) tries interval 1, 2, ... in order, each with its own
//! window, and falls through to the last interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::{count_in_window, RegisterFile, SymbolStream};
use crate::two_interval::{ceil_count, TwoIntervalParams};

/// `i`-fold natural logarithm; `iterlog(k, 0) = k`.
pub fn iterlog(k: f64, i: u32) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("iterated log of non-positive {k}")));
    }
    let mut v = k;
    for step in 0..i {
        v = v.ln();
        if !(v > 0.0) && step + 1 < i {
            return Err(Error::Domain(format!(
                "ln^({}) {k} = {v} is not positive; cannot take another log",
                step + 1
            )));
        }
    }
    Ok(v)
}

/// Smallest `i` with `ln^(i) k <= 1`.
pub fn log_star(k: f64) -> u32 {
    let mut v = k;
    let mut i = 0;
    while v > 1.0 {
        v = v.ln();
        i += 1;
    }
    i
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPartition {
    pub k: usize,
    pub beta: f64,
    /// Number of intervals.
    pub t: usize,
    /// `t + 1` boundaries from `h[0] = 1` down to `h[t] = 0`.
    pub h: Vec<f64>,
}

impl IntervalPartition {
    /// Lower end `ell_i = h[i]` of interval `i` (1-based).
    pub fn lower(&self, i: usize) -> f64 {
        self.h[i]
    }

    /// Upper end `h[i-1]` of interval `i` (1-based).
    pub fn upper(&self, i: usize) -> f64 {
        self.h[i - 1]
    }

    /// Interior boundaries `h[1..t]`, strictly decreasing.
    pub fn thresholds(&self) -> &[f64] {
        &self.h[1..self.t]
    }

    fn validate(&self) -> Result<()> {
        if self.h.len() != self.t + 1 || self.h[0] != 1.0 || self.h[self.t] != 0.0 {
            return Err(Error::MalformedPartition(
                "boundaries must run from 1 down to 0".into(),
            ));
        }
        for w in self.h.windows(2) {
            if !(w[0] > w[1]) {
                return Err(Error::VacuousPartition(format!(
                    "boundaries {:?} are not strictly decreasing",
                    self.h
                )));
            }
        }
        Ok(())
    }
}

/// Partition with `T = max(1, log* k)` intervals.
pub fn build_partition(k: usize, beta: f64) -> Result<IntervalPartition> {
    if k == 0 || !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need k >= 1 and beta > 0 (k = {k}, beta = {beta})"
        )));
    }
    let kf = k as f64;
    let t = (log_star(kf) as usize).max(1);
    let mut h = Vec::with_capacity(t + 1);
    h.push(1.0);
    for i in 1..t {
        h.push(iterlog(kf, i as u32)?.powf(beta) / kf);
    }
    h.push(0.0);
    let partition = IntervalPartition { k, beta, t, h };
    partition.validate()?;
    Ok(partition)
}

/// Tunable constants of the general parameter formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralConstants {
    pub beta: f64,
    pub gamma: f64,
    pub c_n: f64,
    pub c_r: f64,
}

impl Default for GeneralConstants {
    fn default() -> Self {
        Self {
            beta: 2.0,
            gamma: 1.0,
            c_n: 1.0,
            c_r: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralParams {
    pub k: usize,
    pub eps: f64,
    pub beta: f64,
    pub gamma: f64,
    pub partition: IntervalPartition,
    /// Windows `N_1..N_T`.
    pub n: Vec<u64>,
    /// Rounds `R_1..R_T`.
    pub r: Vec<u64>,
    pub c_n: f64,
    pub c_r: f64,
}

/// `N_i = C_N k / (eps (ln^(i) k)^gamma)` for `i < T`, `N_T = C_N k / eps`,
/// `R_i = C_R ln^2(ln^(i-1) k / eps) / eps^2`, all rounded up.
pub fn general_params(k: usize, eps: f64, constants: &GeneralConstants) -> Result<GeneralParams> {
    let GeneralConstants {
        beta,
        gamma,
        c_n,
        c_r,
    } = *constants;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps must be > 0, got {eps}"
        )));
    }
    if !(gamma > 0.0 && c_n > 0.0 && c_r > 0.0) {
        return Err(Error::InvalidParameter(
            "gamma, C_N and C_R must be positive".into(),
        ));
    }
    let partition = build_partition(k, beta)?;
    let t = partition.t;
    let kf = k as f64;
    let mut n = Vec::with_capacity(t);
    let mut r = Vec::with_capacity(t);
    for i in 1..=t {
        let window = if i < t {
            c_n * kf / (eps * iterlog(kf, i as u32)?.powf(gamma))
        } else {
            c_n * kf / eps
        };
        n.push(ceil_count(window));
        let prev = iterlog(kf, i as u32 - 1)?;
        r.push(ceil_count(c_r * (prev / eps).ln().powi(2) / (eps * eps)));
    }
    Ok(GeneralParams {
        k,
        eps,
        beta,
        gamma,
        partition,
        n,
        r,
        c_n,
        c_r,
    })
}

impl GeneralParams {
    pub fn t(&self) -> usize {
        self.partition.t
    }

    /// Window of interval `i` (1-based).
    pub fn window(&self, i: usize) -> u64 {
        self.n[i - 1]
    }

    /// Rounds of interval `i` (1-based).
    pub fn rounds(&self, i: usize) -> u64 {
        self.r[i - 1]
    }

    /// Clip floor `ln(1/(4 h_i))` where `h_i` is the upper end of interval `i`.
    pub fn clip_floor(&self, i: usize) -> f64 {
        (1.0 / (4.0 * self.partition.upper(i))).ln()
    }

    /// The same estimator expressed over the single split of a two-interval
    /// parameter set.
    pub fn from_two_interval(p: &TwoIntervalParams) -> Result<Self> {
        if p.n != p.n1 || p.r != p.r1 {
            return Err(Error::InvalidParameter(
                "two-interval parameters need N = N1 and R = R1".into(),
            ));
        }
        let partition = IntervalPartition {
            k: p.k,
            beta: p.beta,
            t: 2,
            h: vec![1.0, p.ell, 0.0],
        };
        partition.validate()?;
        Ok(Self {
            k: p.k,
            eps: p.eps,
            beta: p.beta,
            gamma: p.gamma,
            partition,
            n: vec![p.n1, p.n2],
            r: vec![p.r1, p.r2],
            c_n: p.c1,
            c_r: p.c2,
        })
    }

    /// Worst case of the sample count: every classifier call runs all the
    /// windows it may try.
    pub fn worst_case_samples(&self) -> u64 {
        let t = self.t();
        let prefix = |i: usize| -> u64 { self.n[..i.min(t - 1)].iter().sum() };
        let prob_phase: u64 = (1..t).map(|i| self.rounds(i) * (1 + prefix(i))).sum();
        let cond_phase: u64 = (1..=t)
            .map(|i| self.rounds(i) * (1 + prefix(i) + self.window(i)))
            .sum();
        prob_phase + cond_phase
    }
}

/// Tries intervals `1..=up_to` in order, drawing `N_i` samples for each and
/// answering `i` as soon as `x` appears at least `N_i * ell_i` times.
/// Falls through to the last interval `T`. Returns a 1-based index.
pub fn gen_est_int(
    stream: &mut SymbolStream<'_>,
    x: usize,
    params: &GeneralParams,
    up_to: usize,
    rf: &mut RegisterFile,
) -> Result<usize> {
    let t = params.t();
    debug_assert!(up_to < t.max(1));
    let level = rf.alloc_int(1)?;
    let mut answer = t;
    while rf.int(level) as usize <= up_to {
        let i = rf.int(level) as usize;
        let n = params.window(i);
        let c = match count_in_window(stream, x, n, rf) {
            Ok(c) => c,
            Err(e) => {
                rf.free(level);
                return Err(e);
            }
        };
        if c as f64 >= n as f64 * params.partition.lower(i) {
            answer = i;
            break;
        }
        rf.incr(level);
    }
    rf.free(level);
    Ok(answer)
}

/// Number of `R_i` rounds whose symbol the `i`-prefix classifier assigns to
/// interval `i`.
pub fn gen_est_prob_int_hits(
    stream: &mut SymbolStream<'_>,
    params: &GeneralParams,
    i: usize,
    rf: &mut RegisterFile,
) -> Result<u64> {
    let t = rf.alloc_int(0)?;
    let x = rf.alloc_int(0)?;
    let hits = rf.alloc_int(0)?;
    while rf.int(t) < params.rounds(i) {
        rf.set_int(x, stream.next_symbol() as u64);
        if gen_est_int(stream, rf.int(x) as usize, params, i, rf)? == i {
            rf.incr(hits);
        }
        rf.incr(t);
    }
    let out = rf.int(hits);
    for reg in [hits, x, t] {
        rf.free(reg);
    }
    Ok(out)
}

/// Estimated classifier masses `p̂(I_1), ..., p̂(I_{T-1})`.
pub fn gen_est_prob_int(
    stream: &mut SymbolStream<'_>,
    params: &GeneralParams,
    rf: &mut RegisterFile,
) -> Result<Vec<f64>> {
    (1..params.t())
        .map(|i| Ok(gen_est_prob_int_hits(stream, params, i, rf)? as f64 / params.rounds(i) as f64))
        .collect()
}

/// Conditional mean of one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMean {
    /// `H̄_i`; zero when degenerate.
    pub h_bar: f64,
    pub hits: u64,
    pub degenerate: bool,
}

/// Conditional mean for interval `i` with clipping at `ln(1/(4 h_i))`.
pub fn gen_cond_exp_interval(
    stream: &mut SymbolStream<'_>,
    params: &GeneralParams,
    i: usize,
    rf: &mut RegisterFile,
    mut observe: impl FnMut(f64),
) -> Result<IntervalMean> {
    let up_to = i.min(params.t() - 1);
    let window = params.window(i);
    let floor = params.clip_floor(i);
    let t = rf.alloc_int(0)?;
    let x = rf.alloc_int(0)?;
    let matched = rf.alloc_int(0)?;
    let acc = rf.alloc_real(0.0)?;
    while rf.int(t) < params.rounds(i) {
        rf.set_int(x, stream.next_symbol() as u64);
        let sym = rf.int(x) as usize;
        if gen_est_int(stream, sym, params, up_to, rf)? == i {
            rf.incr(matched);
            let c = count_in_window(stream, sym, window, rf)?;
            let v = (window as f64 / (c + 1) as f64).ln().max(floor);
            observe(v);
            rf.add_real(acc, v);
        }
        rf.incr(t);
    }
    let hits = rf.int(matched);
    let out = if hits == 0 {
        IntervalMean {
            h_bar: 0.0,
            hits,
            degenerate: true,
        }
    } else {
        IntervalMean {
            h_bar: rf.real(acc) / hits as f64,
            hits,
            degenerate: false,
        }
    };
    for reg in [acc, matched, x, t] {
        rf.free(reg);
    }
    Ok(out)
}

/// Conditional means for all `T` intervals, in order.
pub fn gen_cond_exp(
    stream: &mut SymbolStream<'_>,
    params: &GeneralParams,
    rf: &mut RegisterFile,
) -> Result<Vec<IntervalMean>> {
    (1..=params.t())
        .map(|i| gen_cond_exp_interval(stream, params, i, rf, |_| {}))
        .collect()
}

/// Everything a general run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralRun {
    pub estimate: f64,
    /// `p̂(I_1..I_{T-1})`.
    pub p_hat: Vec<f64>,
    pub means: Vec<IntervalMean>,
}

impl GeneralRun {
    pub fn degenerate_intervals(&self) -> Vec<usize> {
        self.means
            .iter()
            .enumerate()
            .filter(|(_, m)| m.degenerate)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Runs the estimator interval by interval, keeping only the running sums
/// `sum p̂_i H̄_i` and `sum p̂_i` between intervals.
pub fn run_general(
    stream: &mut SymbolStream<'_>,
    params: &GeneralParams,
    rf: &mut RegisterFile,
) -> Result<GeneralRun> {
    let t = params.t();
    let acc = rf.alloc_real(0.0)?;
    let mass = rf.alloc_real(0.0)?;
    let p_i = rf.alloc_real(0.0)?;
    let mut p_hat = Vec::with_capacity(t.saturating_sub(1));
    let mut means = Vec::with_capacity(t);
    for i in 1..=t {
        if i < t {
            let hits = gen_est_prob_int_hits(stream, params, i, rf)?;
            rf.set_real(p_i, hits as f64 / params.rounds(i) as f64);
            p_hat.push(rf.real(p_i));
        } else {
            rf.set_real(p_i, 1.0 - rf.real(mass));
        }
        let mean = gen_cond_exp_interval(stream, params, i, rf, |_| {})?;
        means.push(mean);
        rf.add_real(acc, rf.real(p_i) * mean.h_bar);
        if i < t {
            rf.add_real(mass, rf.real(p_i));
        }
    }
    let estimate = rf.real(acc);
    for reg in [p_i, mass, acc] {
        rf.free(reg);
    }
    Ok(GeneralRun {
        estimate,
        p_hat,
        means,
    })
}

/// One asymptotic constant constraint and whether it holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Evaluates the constraints the asymptotic guarantee places on the
/// constants: `beta > 16`, `gamma = beta/2`, `C_N > 36`, `C_N > 108 beta`,
/// `C_T >= 30`, `C_R >= 6 C_T^2 (beta+1)^(5/2)`.
pub fn theory_constant_check(
    beta: f64,
    gamma: f64,
    c_n: f64,
    c_r: f64,
    c_t: f64,
) -> Vec<ConstraintCheck> {
    let check = |name: &str, value: f64, threshold: f64, passed: bool| ConstraintCheck {
        name: name.to_string(),
        value,
        threshold,
        passed,
    };
    let c_r_min = 6.0 * c_t * c_t * (beta + 1.0).powf(2.5);
    vec![
        check("beta > 16", beta, 16.0, beta > 16.0),
        check("gamma = beta/2", gamma, beta / 2.0, gamma == beta / 2.0),
        check("C_N > 36", c_n, 36.0, c_n > 36.0),
        check("C_N > 108*beta", c_n, 108.0 * beta, c_n > 108.0 * beta),
        check("C_T >= 30", c_t, 30.0, c_t >= 30.0),
        check(
            "C_R >= 6*C_T^2*(beta+1)^(5/2)",
            c_r,
            c_r_min,
            c_r >= c_r_min,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Family, FamilySpec};
    use crate::two_interval::{two_interval_params, TwoIntervalConstants};

    #[test]
    fn iterlog_values() {
        assert_eq!(iterlog(7.5, 0).unwrap(), 7.5);
        assert!((iterlog(std::f64::consts::E, 1).unwrap() - 1.0).abs() < 1e-15);
        // ln ln 1024 at 30 digits: 1.93607217241238...
        assert!((iterlog(1024.0, 2).unwrap() - 1.936_072_172_412_381).abs() < 1e-13);
        assert!(matches!(iterlog(2.0, 3), Err(Error::Domain(_))));
        assert!(iterlog(0.0, 1).is_err());
    }

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(std::f64::consts::E), 1);
        assert_eq!(log_star(2.0), 1);
        assert_eq!(log_star(1024.0), 3);
        assert_eq!(log_star(1.0), 0);
    }

    #[test]
    fn partition_for_1024() {
        let p = build_partition(1024, 2.0).unwrap();
        assert_eq!(p.t, 3);
        assert_eq!(p.h[0], 1.0);
        assert!((p.h[1] - 0.046_919_239_640_449_36).abs() < 1e-14);
        assert!((p.h[2] - 0.003_660_522_907_021_092).abs() < 1e-15);
        assert_eq!(p.h[3], 0.0);
        assert!(p.h[2] < 2f64.exp() / 1024.0);
    }

    #[test]
    fn vacuous_partition_is_an_error() {
        assert!(matches!(
            build_partition(1024, 17.0),
            Err(Error::VacuousPartition(_))
        ));
    }

    #[test]
    fn tiny_alphabet_has_one_interval() {
        let p = build_partition(2, 2.0).unwrap();
        assert_eq!(p.t, 1);
        assert_eq!(p.h, vec![1.0, 0.0]);
    }

    #[test]
    fn dirac_classifies_into_first_interval() {
        let pmf = FamilySpec::new(Family::Dirac, 1024).materialize().unwrap();
        let params = general_params(1024, 1.0, &GeneralConstants::default()).unwrap();
        let mut s = SymbolStream::seeded(&pmf, 0);
        let mut rf = RegisterFile::default();
        assert_eq!(gen_est_int(&mut s, 0, &params, 2, &mut rf).unwrap(), 1);
        assert_eq!(s.consumed(), params.window(1));
        // a symbol that never appears falls through every level
        assert_eq!(gen_est_int(&mut s, 5, &params, 2, &mut rf).unwrap(), 3);
    }

    #[test]
    fn dirac_general_run() {
        let pmf = FamilySpec::new(Family::Dirac, 1024).materialize().unwrap();
        let params = general_params(1024, 1.0, &GeneralConstants::default()).unwrap();
        let mut s = SymbolStream::seeded(&pmf, 0);
        let mut rf = RegisterFile::default();
        let probs = gen_est_prob_int(&mut s, &params, &mut rf).unwrap();
        assert_eq!(probs, vec![1.0, 0.0]);
        let means = gen_cond_exp(&mut s, &params, &mut rf).unwrap();
        let n1 = params.window(1) as f64;
        assert!((means[0].h_bar - (n1 / (n1 + 1.0)).ln()).abs() < 1e-12);
        assert!(means[1].degenerate && means[2].degenerate);

        let mut s = SymbolStream::seeded(&pmf, 0);
        let run = run_general(&mut s, &params, &mut rf).unwrap();
        assert!((run.estimate - (n1 / (n1 + 1.0)).ln()).abs() < 1e-12);
        assert_eq!(run.degenerate_intervals(), vec![2, 3]);
        assert!(s.consumed() <= params.worst_case_samples());
        assert!(rf.high_water() <= 20);
        assert_eq!(rf.live(), 0);
    }

    #[test]
    fn single_interval_degenerates_to_simple_run() {
        let pmf = FamilySpec::new(Family::Uniform, 2).materialize().unwrap();
        let params = general_params(2, 0.5, &GeneralConstants::default()).unwrap();
        assert_eq!(params.t(), 1);
        let mut s = SymbolStream::seeded(&pmf, 9);
        let mut rf = RegisterFile::default();
        let run = run_general(&mut s, &params, &mut rf).unwrap();
        assert!(run.p_hat.is_empty());
        assert_eq!(run.means[0].hits, params.rounds(1));
        assert_eq!(run.estimate, run.means[0].h_bar);
        assert_eq!(s.consumed(), params.rounds(1) * (1 + params.window(1)));
    }

    #[test]
    fn two_interval_formulas_coincide() {
        let c = TwoIntervalConstants::default();
        let two = two_interval_params(12, 0.5, &c).unwrap();
        let from_two = GeneralParams::from_two_interval(&two).unwrap();
        let direct = general_params(
            12,
            0.5,
            &GeneralConstants {
                beta: c.beta,
                gamma: c.beta / 2.0,
                c_n: c.c1,
                c_r: c.c2,
            },
        )
        .unwrap();
        assert_eq!(from_two, direct);
    }

    #[test]
    fn clip_floor_uses_upper_boundary() {
        let params = general_params(1024, 0.5, &GeneralConstants::default()).unwrap();
        assert!((params.clip_floor(1) - 0.25f64.ln()).abs() < 1e-15);
        let h1 = params.partition.h[1];
        assert!((params.clip_floor(2) - (1.0 / (4.0 * h1)).ln()).abs() < 1e-12);
    }

    #[test]
    fn constant_checks() {
        let c_r = 6.0 * 900.0 * 18f64.powf(2.5);
        let all = theory_constant_check(17.0, 8.5, 2000.0, c_r, 30.0);
        assert!(all.iter().all(|c| c.passed), "{all:?}");
        let practical = theory_constant_check(2.0, 1.0, 1.0, 1.0, 30.0);
        assert!(!practical[0].passed);
        let low_cn = theory_constant_check(17.0, 8.5, 100.0, c_r, 30.0);
        assert!(!low_cn[3].passed && low_cn[2].passed);
    }
}
