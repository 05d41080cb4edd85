//! Small numeric helpers shared by the exact oracles.

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Table of `ln(i!)` for `i = 0..=n`, built with compensated summation.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn up_to(n: u64) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        let mut acc = CompensatedSum::new();
        table.push(0.0);
        for i in 1..=n {
            acc.add((i as f64).ln());
            table.push(acc.value());
        }
        Self { table }
    }

    pub fn ln_factorial(&self, n: u64) -> f64 {
        self.table[n as usize]
    }

    pub fn ln_choose(&self, n: u64, c: u64) -> f64 {
        self.ln_factorial(n) - self.ln_factorial(c) - self.ln_factorial(n - c)
    }

    /// `Pr[Bin(n, p) = c]`, exact at the endpoints `p = 0` and `p = 1`.
    pub fn binomial_pmf(&self, n: u64, c: u64, p: f64) -> f64 {
        debug_assert!(c <= n);
        if p <= 0.0 {
            return if c == 0 { 1.0 } else { 0.0 };
        }
        if p >= 1.0 {
            return if c == n { 1.0 } else { 0.0 };
        }
        let ln = self.ln_choose(n, c) + c as f64 * p.ln() + (n - c) as f64 * (-p).ln_1p();
        ln.exp()
    }

    /// The full pmf vector of `Bin(n, p)`.
    pub fn binomial_pmfs(&self, n: u64, p: f64) -> Vec<f64> {
        (0..=n).map(|c| self.binomial_pmf(n, c, p)).collect()
    }
}

/// splitmix64 finalizer; used to derive per-trial seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run seeded with `seed`. Depends only on the
/// pair, so reports do not depend on how trials are scheduled.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut values = vec![1.0e16];
        values.extend(std::iter::repeat_n(1.0, 1000));
        values.push(-1.0e16);
        assert_eq!(compensated_sum(values), 1000.0);
    }

    #[test]
    fn binomial_pmf_matches_direct_product() {
        let lf = LnFactorials::up_to(20);
        // C(10,3) = 120
        let direct = 120.0 * 0.3f64.powi(3) * 0.7f64.powi(7);
        assert!((lf.binomial_pmf(10, 3, 0.3) - direct).abs() < 1e-15);
        assert_eq!(lf.binomial_pmf(5, 5, 1.0), 1.0);
        assert_eq!(lf.binomial_pmf(5, 0, 0.0), 1.0);
        assert_eq!(lf.binomial_pmf(5, 1, 0.0), 0.0);
        let total: f64 = compensated_sum(lf.binomial_pmfs(20, 0.37));
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trial_seeds_differ() {
        let a = trial_seed(7, 0);
        let b = trial_seed(7, 1);
        let c = trial_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, trial_seed(7, 0));
    }
}
