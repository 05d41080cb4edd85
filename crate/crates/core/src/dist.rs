//! k-ary distributions, the test-family generators and exact ground truth.

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Tolerance on `|sum(probs) - 1|` accepted by [`Pmf::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// A probability mass function over the symbols `0..k`.
///
/// The alias table used by [`Pmf::sample`] is built once at construction,
/// so a `Pmf` is cheap to share across trials.
#[derive(Debug, Clone)]
pub struct Pmf {
    probs: Vec<f64>,
    alias: WeightedAliasIndex<f64>,
}

impl PartialEq for Pmf {
    fn eq(&self, other: &Self) -> bool {
        self.probs == other.probs
    }
}

impl Pmf {
    /// Validates and wraps `probs`. Inputs are never rescaled.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "probability {bad} is not a finite non-negative number"
            )));
        }
        let sum = compensated_sum(probs.iter().copied());
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NormalizationFailure {
                sum,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        let alias = WeightedAliasIndex::new(probs.clone())
            .map_err(|e| Error::InvalidParameter(format!("alias table: {e}")))?;
        Ok(Self { probs, alias })
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// One i.i.d. draw `X ~ p`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.alias.sample(rng)
    }

    /// Shannon entropy in nats; zero entries contribute nothing.
    pub fn entropy(&self) -> f64 {
        exact_entropy(self)
    }
}

/// `H(p) = sum_x p(x) ln(1/p(x))` in nats.
pub fn exact_entropy(p: &Pmf) -> f64 {
    compensated_sum(p.probs().iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()))
}

/// Named distribution families used as the test corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Uniform,
    /// `p(i) ∝ (i + 1)^(-s)`.
    Zipf {
        s: f64,
    },
    /// Geometric with success probability `r`, truncated to `k` symbols:
    /// `p(i) ∝ (1 - r)^i`.
    Geometric {
        r: f64,
    },
    /// Point mass on symbol 0.
    Dirac,
    /// `head_count` symbols share `head_mass` equally; the rest share the
    /// remainder equally.
    TwoLevel {
        head_mass: f64,
        head_count: usize,
    },
    /// Explicit probabilities; must already be normalized.
    Custom {
        probs: Vec<f64>,
    },
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Uniform => write!(f, "uniform"),
            Family::Zipf { s } => write!(f, "zipf:{s}"),
            Family::Geometric { r } => write!(f, "geometric:{r}"),
            Family::Dirac => write!(f, "dirac"),
            Family::TwoLevel {
                head_mass,
                head_count,
            } => write!(f, "two-level:{head_mass}:{head_count}"),
            Family::Custom { probs } => {
                let items: Vec<String> = probs.iter().map(|p| p.to_string()).collect();
                write!(f, "custom:{}", items.join(","))
            }
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    /// Parses `uniform`, `dirac`, `zipf:S`, `geometric:R`,
    /// `two-level:MASS:COUNT` and `custom:P0,P1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("family `{s}`: {msg}"));
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| bad(&format!("`{v}` is not a number")))
        };
        let mut parts = s.trim().splitn(2, ':');
        let name = parts.next().unwrap_or_default();
        let rest = parts.next();
        match (name, rest) {
            ("uniform", None) => Ok(Family::Uniform),
            ("dirac", None) => Ok(Family::Dirac),
            ("zipf", None) => Ok(Family::Zipf { s: 1.0 }),
            ("zipf", Some(v)) => Ok(Family::Zipf { s: num(v)? }),
            ("geometric", Some(v)) => Ok(Family::Geometric { r: num(v)? }),
            ("two-level", Some(v)) => {
                let (mass, count) = v
                    .split_once(':')
                    .ok_or_else(|| bad("expected MASS:COUNT"))?;
                let head_count = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad("COUNT must be a positive integer"))?;
                Ok(Family::TwoLevel {
                    head_mass: num(mass)?,
                    head_count,
                })
            }
            ("custom", Some(v)) => Ok(Family::Custom {
                probs: v.split(',').map(num).collect::<Result<_>>()?,
            }),
            _ => Err(bad("unknown family")),
        }
    }
}

/// A family together with its alphabet size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub k: usize,
}

impl FamilySpec {
    pub fn new(family: Family, k: usize) -> Self {
        Self { family, k }
    }

    pub fn materialize(&self) -> Result<Pmf> {
        materialize(self)
    }
}

fn normalized(weights: Vec<f64>) -> Result<Pmf> {
    let total = compensated_sum(weights.iter().copied());
    Pmf::new(weights.into_iter().map(|w| w / total).collect())
}

/// Builds the pmf a [`FamilySpec`] describes. Deterministic.
pub fn materialize(spec: &FamilySpec) -> Result<Pmf> {
    let k = spec.k;
    let invalid = |msg: String| Err(Error::InvalidParameter(msg));
    if k == 0 {
        return invalid("k must be at least 1".into());
    }
    match &spec.family {
        Family::Uniform => Pmf::new(vec![1.0 / k as f64; k]),
        Family::Zipf { s } => {
            if !(s.is_finite() && *s > 0.0) {
                return invalid(format!("zipf exponent must be > 0, got {s}"));
            }
            normalized((1..=k).map(|i| (i as f64).powf(-s)).collect())
        }
        Family::Geometric { r } => {
            if !(*r > 0.0 && *r < 1.0) {
                return invalid(format!("geometric r must lie in (0,1), got {r}"));
            }
            normalized((0..k).map(|i| (1.0 - r).powi(i as i32)).collect())
        }
        Family::Dirac => {
            let mut probs = vec![0.0; k];
            probs[0] = 1.0;
            Pmf::new(probs)
        }
        Family::TwoLevel {
            head_mass,
            head_count,
        } => {
            if !(*head_mass > 0.0 && *head_mass < 1.0) {
                return invalid(format!(
                    "two-level head mass must lie in (0,1), got {head_mass}"
                ));
            }
            if *head_count == 0 || *head_count >= k {
                return invalid(format!(
                    "two-level head count must lie in [1, k), got {head_count} with k = {k}"
                ));
            }
            let head = head_mass / *head_count as f64;
            let tail = (1.0 - head_mass) / (k - head_count) as f64;
            Pmf::new(
                (0..k)
                    .map(|i| if i < *head_count { head } else { tail })
                    .collect(),
            )
        }
        Family::Custom { probs } => {
            if probs.len() != k {
                return invalid(format!(
                    "custom family lists {} probabilities but k = {k}",
                    probs.len()
                ));
            }
            Pmf::new(probs.clone())
        }
    }
}

/// Exact mass of each interval of the partition of `[0, 1]` cut at
/// `thresholds` (strictly decreasing, inside `(0, 1]`).
///
/// Interval `j` (0-based) is `[thresholds[j], thresholds[j-1])`, with the
/// first interval closed at 1 and the last one being `[0, thresholds[last])`.
pub fn interval_masses(p: &Pmf, thresholds: &[f64]) -> Result<Vec<f64>> {
    for (i, t) in thresholds.iter().enumerate() {
        if !(*t > 0.0 && *t <= 1.0) {
            return Err(Error::MalformedPartition(format!(
                "threshold {t} lies outside (0, 1]"
            )));
        }
        if i > 0 && *t >= thresholds[i - 1] {
            return Err(Error::MalformedPartition(
                "thresholds must be strictly decreasing".into(),
            ));
        }
    }
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); thresholds.len() + 1];
    for &q in p.probs() {
        let j = thresholds
            .iter()
            .position(|&t| q >= t)
            .unwrap_or(thresholds.len());
        buckets[j].push(q);
    }
    Ok(buckets.into_iter().map(compensated_sum).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(family: Family, k: usize) -> Pmf {
        FamilySpec::new(family, k).materialize().unwrap()
    }

    #[test]
    fn uniform_and_dirac() {
        assert_eq!(spec(Family::Uniform, 4).probs(), &[0.25; 4]);
        assert_eq!(spec(Family::Dirac, 3).probs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn zipf_two_symbols() {
        let p = spec(Family::Zipf { s: 1.0 }, 2);
        assert!((p.prob(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.prob(1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        let cases = [
            FamilySpec::new(Family::Zipf { s: 0.0 }, 4),
            FamilySpec::new(Family::Geometric { r: 1.0 }, 4),
            FamilySpec::new(Family::Uniform, 0),
            FamilySpec::new(
                Family::TwoLevel {
                    head_mass: 0.5,
                    head_count: 4,
                },
                4,
            ),
            FamilySpec::new(Family::Custom { probs: vec![0.5] }, 2),
        ];
        for c in cases {
            assert!(
                matches!(c.materialize(), Err(Error::InvalidParameter(_))),
                "{c:?}"
            );
        }
    }

    #[test]
    fn custom_is_rejected_not_rescaled() {
        let err = FamilySpec::new(
            Family::Custom {
                probs: vec![0.5, 0.6],
            },
            2,
        )
        .materialize()
        .unwrap_err();
        assert!(matches!(err, Error::NormalizationFailure { .. }));
        let ok = FamilySpec::new(
            Family::Custom {
                probs: vec![0.3, 0.7],
            },
            2,
        )
        .materialize()
        .unwrap();
        assert_eq!(ok.probs(), &[0.3, 0.7]);
    }

    #[test]
    fn family_strings_parse() {
        assert_eq!("uniform".parse::<Family>().unwrap(), Family::Uniform);
        assert_eq!(
            "zipf:1.5".parse::<Family>().unwrap(),
            Family::Zipf { s: 1.5 }
        );
        assert_eq!(
            "two-level:0.5:4".parse::<Family>().unwrap(),
            Family::TwoLevel {
                head_mass: 0.5,
                head_count: 4
            }
        );
        let custom: Family = "custom:0.2,0.8".parse().unwrap();
        assert_eq!(custom.to_string().parse::<Family>().unwrap(), custom);
        assert!("poisson".parse::<Family>().is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!((spec(Family::Uniform, 4).entropy() - 4f64.ln()).abs() < 1e-12);
        assert_eq!(spec(Family::Dirac, 5).entropy(), 0.0);
        let p = Pmf::new(vec![0.9, 0.1]).unwrap();
        // -0.9 ln 0.9 - 0.1 ln 0.1, evaluated at 30 digits
        assert!((p.entropy() - 0.325_082_973_391_448_24).abs() < 1e-15);
    }

    #[test]
    fn interval_mass_examples() {
        let p = Pmf::new(vec![0.9, 0.1]).unwrap();
        assert_eq!(interval_masses(&p, &[0.5]).unwrap(), vec![0.9, 0.1]);
        let u = spec(Family::Uniform, 4);
        assert_eq!(interval_masses(&u, &[0.1]).unwrap(), vec![1.0, 0.0]);
        let q = Pmf::new(vec![0.5, 0.3, 0.2]).unwrap();
        let m = interval_masses(&q, &[0.25]).unwrap();
        assert!((m[0] - 0.8).abs() < 1e-15 && (m[1] - 0.2).abs() < 1e-15);
        assert!(matches!(
            interval_masses(&q, &[0.2, 0.3]),
            Err(Error::MalformedPartition(_))
        ));
        assert!(matches!(
            interval_masses(&q, &[1.5]),
            Err(Error::MalformedPartition(_))
        ));
    }

    #[test]
    fn dirac_always_samples_zero() {
        let p = spec(Family::Dirac, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..10_000).all(|_| p.sample(&mut rng) == 0));
    }

    #[test]
    fn fair_coin_frequency() {
        let p = spec(Family::Uniform, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let zeros = (0..n).filter(|_| p.sample(&mut rng) == 0).count();
        let freq = zeros as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 0.002, "{freq}");
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let p = spec(Family::Zipf { s: 1.2 }, 50);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..200).map(|_| p.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }
}
