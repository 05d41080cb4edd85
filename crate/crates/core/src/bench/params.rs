//! The `params` table.

use std::fmt::Write;

use crate::bench::config::{Mode, RunConfig};
use crate::error::{Error, Result};
use crate::general::theory_constant_check;
use crate::trial::EstimatorConfig;

/// Renders the parameter table for `config`. In theory-print mode the
/// constant constraint report is appended, and a vacuous partition is
/// reported in the table instead of aborting.
pub fn params_table(config: &RunConfig) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "estimator  {}", config.estimator).unwrap();
    writeln!(out, "k          {}", config.k).unwrap();
    writeln!(out, "eps        {}", config.eps).unwrap();
    match config.estimator_config() {
        Ok(est) => write_params(&mut out, &est),
        Err(Error::VacuousPartition(msg)) if config.mode == Mode::TheoryPrint => {
            writeln!(out, "partition  vacuous: {msg}").unwrap();
            writeln!(out, "hint       {}", vacuous_hint()).unwrap();
        }
        Err(Error::VacuousPartition(msg)) => {
            return Err(Error::VacuousPartition(format!(
                "{msg}; {}",
                vacuous_hint()
            )))
        }
        Err(e) => return Err(e),
    }
    if config.mode == Mode::TheoryPrint {
        let c = &config.constants;
        writeln!(out).unwrap();
        writeln!(out, "theory constraints").unwrap();
        for check in theory_constant_check(c.beta, c.gamma(), c.c_n, c.c_r, c.c_t) {
            writeln!(
                out,
                "  {:<4} {:<32} value {} threshold {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.value,
                check.threshold
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn vacuous_hint() -> &'static str {
    "lower beta (or raise k) so that every boundary lies strictly inside (0, 1)"
}

fn write_params(out: &mut String, est: &EstimatorConfig) {
    match est {
        EstimatorConfig::Simple(p) => {
            writeln!(out, "N          {}", p.n).unwrap();
            writeln!(out, "R          {}", p.r).unwrap();
        }
        EstimatorConfig::TwoInterval(p) => {
            writeln!(out, "beta       {}", p.beta).unwrap();
            writeln!(out, "gamma      {}", p.gamma).unwrap();
            writeln!(out, "ell        {}", p.ell).unwrap();
            writeln!(out, "N = N1     {}", p.n1).unwrap();
            writeln!(out, "R = R1     {}", p.r1).unwrap();
            writeln!(out, "N2         {}", p.n2).unwrap();
            writeln!(out, "R2         {}", p.r2).unwrap();
            writeln!(out, "clip floor {}", p.clip_floor()).unwrap();
        }
        EstimatorConfig::General(p) => {
            writeln!(out, "beta       {}", p.beta).unwrap();
            writeln!(out, "gamma      {}", p.gamma).unwrap();
            writeln!(out, "T          {}", p.t()).unwrap();
            writeln!(out, "boundaries {:?}", p.partition.h).unwrap();
            writeln!(
                out,
                "interval  lower                   upper                   N_i        R_i"
            )
            .unwrap();
            for i in 1..=p.t() {
                writeln!(
                    out,
                    "{:<9} {:<23} {:<23} {:<10} {}",
                    i,
                    p.partition.lower(i),
                    p.partition.upper(i),
                    p.window(i),
                    p.rounds(i)
                )
                .unwrap();
            }
        }
        EstimatorConfig::PlugIn { n, .. } => {
            writeln!(out, "n          {n}").unwrap();
        }
    }
    writeln!(
        out,
        "predicted worst-case samples {}",
        est.worst_case_samples()
    )
    .unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::config::Constants;
    use crate::trial::EstimatorKind;

    #[test]
    fn simple_table() {
        let cfg = RunConfig {
            k: 8,
            eps: 0.25,
            ..Default::default()
        };
        let t = params_table(&cfg).unwrap();
        assert!(t.contains("N          64\n"));
        assert!(t.contains("R          1116\n"));
        assert!(t.contains("predicted worst-case samples 72540\n"));
    }

    #[test]
    fn general_table_lists_boundaries() {
        let cfg = RunConfig {
            k: 1024,
            estimator: EstimatorKind::General,
            ..Default::default()
        };
        let t = params_table(&cfg).unwrap();
        assert!(t.contains("T          3\n"));
        assert!(t.contains("boundaries [1.0, 0.0469192396404"));
    }

    #[test]
    fn theory_print_flags_small_beta() {
        let cfg = RunConfig {
            k: 1024,
            estimator: EstimatorKind::General,
            mode: Mode::TheoryPrint,
            ..Default::default()
        };
        let t = params_table(&cfg).unwrap();
        assert!(t.contains("FAIL beta > 16"));
    }

    #[test]
    fn vacuous_partition_hint() {
        let cfg = RunConfig {
            k: 1024,
            estimator: EstimatorKind::General,
            constants: Constants {
                beta: 17.0,
                ..Default::default()
            },
            ..Default::default()
        };
        let err = params_table(&cfg).unwrap_err();
        assert!(err.to_string().contains("lower beta"));
        let t = params_table(&RunConfig {
            mode: Mode::TheoryPrint,
            ..cfg
        })
        .unwrap();
        assert!(t.contains("vacuous"));
        assert!(t.contains("PASS beta > 16"));
    }
}
