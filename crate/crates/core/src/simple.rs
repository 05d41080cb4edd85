//! The one-interval estimator: sample a symbol, count it in the next `N`
//! symbols, average `ln(N / (count + 1))` over `R` rounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::{count_in_window, RegisterFile, SymbolStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleParams {
    /// Window length.
    pub n: u64,
    /// Number of rounds.
    pub r: u64,
    pub k: usize,
    pub eps: f64,
}

impl SimpleParams {
    pub fn new(n: u64, r: u64, k: usize, eps: f64) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::InvalidParameter(format!(
                "window and round counts must be positive (N = {n}, R = {r})"
            )));
        }
        Ok(Self { n, r, k, eps })
    }

    /// Exact number of samples a run consumes: `R (N + 1)`.
    pub fn samples(&self) -> u64 {
        self.r * (self.n + 1)
    }
}

/// `N = ceil(2k/eps)`, `R = ceil(4 ln^2(1 + 2k/eps) / eps^2)`.
pub fn simple_params(k: usize, eps: f64) -> Result<SimpleParams> {
    if k == 0 || !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need k >= 1 and eps > 0 (k = {k}, eps = {eps})"
        )));
    }
    let ratio = 2.0 * k as f64 / eps;
    let n = ratio.ceil() as u64;
    let r = (4.0 * ratio.ln_1p().powi(2) / (eps * eps)).ceil() as u64;
    SimpleParams::new(n.max(1), r.max(1), k, eps)
}

pub fn run_simple(
    stream: &mut SymbolStream<'_>,
    params: &SimpleParams,
    rf: &mut RegisterFile,
) -> Result<f64> {
    run_simple_observed(stream, params, rf, |_| {})
}

/// As [`run_simple`], reporting every per-round value to `observe`.
pub fn run_simple_observed(
    stream: &mut SymbolStream<'_>,
    params: &SimpleParams,
    rf: &mut RegisterFile,
    mut observe: impl FnMut(f64),
) -> Result<f64> {
    let n = params.n;
    let t = rf.alloc_int(0)?;
    let x = rf.alloc_int(0)?;
    let sum = rf.alloc_real(0.0)?;
    let round = rf.alloc_real(0.0)?;
    while rf.int(t) < params.r {
        rf.set_int(x, stream.next_symbol() as u64);
        let c = count_in_window(stream, rf.int(x) as usize, n, rf)?;
        rf.set_real(round, (n as f64 / (c + 1) as f64).ln());
        observe(rf.real(round));
        rf.add_real(sum, rf.real(round));
        rf.incr(t);
    }
    // the final estimate reuses the round register
    rf.set_real(round, rf.real(sum) / params.r as f64);
    let estimate = rf.real(round);
    for reg in [round, sum, x, t] {
        rf.free(reg);
    }
    Ok(estimate)
}

/// Worst-case bias `|E[estimate] - H(p)| <= k / N`.
pub fn bias_bound(k: usize, n: u64) -> f64 {
    k as f64 / n as f64
}

/// `Pr(|estimate - E[estimate]| >= mu) <= 2 exp(-2 R mu^2 / ln^2(N + 1))`,
/// clamped to 1. `n` is taken as a real so the bound can be evaluated off
/// the integer grid.
pub fn concentration_bound(r: u64, n: f64, mu: f64) -> f64 {
    let width = (n + 1.0).ln();
    (2.0 * (-2.0 * r as f64 * mu * mu / (width * width)).exp()).min(1.0)
}
