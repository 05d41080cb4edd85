//! Run configuration: a TOML document mirroring the CLI flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dist::{Family, FamilySpec};
use crate::error::{Error, Result};
use crate::general::{general_params, GeneralConstants};
use crate::oracles::plug_in_samples;
use crate::simple::simple_params;
use crate::trial::{EstimatorConfig, EstimatorKind};
use crate::two_interval::{two_interval_params, TwoIntervalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Executable parameters with tuned constants.
    Practical,
    /// Also print the asymptotic constant constraints.
    TheoryPrint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    /// Converts a value in nats to these units.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

/// Estimator constants. `gamma` defaults to `beta / 2` when unset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub beta: f64,
    pub gamma: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c_n: f64,
    pub c_r: f64,
    /// Only used by the theory-mode constraint report.
    pub c_t: f64,
}

impl Default for Constants {
    /// Tuned practical defaults: `beta = 2` and every multiplier 2.
    fn default() -> Self {
        Self {
            beta: 2.0,
            gamma: None,
            c1: 2.0,
            c2: 2.0,
            c_n: 2.0,
            c_r: 2.0,
            c_t: 30.0,
        }
    }
}

impl Constants {
    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or(self.beta / 2.0)
    }

    pub fn two_interval(&self) -> TwoIntervalConstants {
        TwoIntervalConstants {
            beta: self.beta,
            c1: self.c1,
            c2: self.c2,
        }
    }

    pub fn general(&self) -> GeneralConstants {
        GeneralConstants {
            beta: self.beta,
            gamma: self.gamma(),
            c_n: self.c_n,
            c_r: self.c_r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub k: usize,
    pub family: Family,
    pub estimator: EstimatorKind,
    pub eps: f64,
    pub mode: Mode,
    pub constants: Constants,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    pub workers: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 8,
            family: Family::Uniform,
            estimator: EstimatorKind::Simple,
            eps: 0.5,
            mode: Mode::Practical,
            constants: Constants::default(),
            trials: 1,
            seed: 0,
            workers: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(s).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn family_spec(&self) -> FamilySpec {
        FamilySpec::new(self.family.clone(), self.k)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be > 0, got {}", self.eps));
        }
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        let c = &self.constants;
        if [c.beta, c.gamma(), c.c1, c.c2, c.c_n, c.c_r]
            .iter()
            .any(|v| !(*v > 0.0 && v.is_finite()))
        {
            return bad("constants must be positive".into());
        }
        if self.estimator == EstimatorKind::TwoInterval && c.gamma() != c.beta / 2.0 {
            return bad(format!(
                "two-interval estimator requires gamma = beta/2 (beta = {}, gamma = {})",
                c.beta,
                c.gamma()
            ));
        }
        Ok(())
    }

    /// Turns the configuration into concrete estimator parameters.
    pub fn estimator_config(&self) -> Result<EstimatorConfig> {
        self.validate()?;
        let c = &self.constants;
        Ok(match self.estimator {
            EstimatorKind::Simple => EstimatorConfig::Simple(simple_params(self.k, self.eps)?),
            EstimatorKind::TwoInterval => EstimatorConfig::TwoInterval(two_interval_params(
                self.k,
                self.eps,
                &c.two_interval(),
            )?),
            EstimatorKind::General => {
                EstimatorConfig::General(general_params(self.k, self.eps, &c.general())?)
            }
            EstimatorKind::PlugIn => EstimatorConfig::PlugIn {
                k: self.k,
                n: plug_in_samples(self.k, self.eps),
            },
        })
    }
}
