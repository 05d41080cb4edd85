//! Constant-space streaming estimators of Shannon entropy.
//!
//! Given a stream of i.i.d. samples from an unknown distribution over `k`
//! symbols, the estimators here approximate its entropy (in nats) while
//! keeping at most 20 words of mutable state:
//!
//! * [`simple`]: one window per round, `ln(N / (count + 1))` averaged.
//! * [`two_interval`]: a classifier splits symbols into frequent and rare,
//!   each with its own window and round budget.
//! * [`general`]: the same idea over an iterated-logarithm partition.
//!
//! All mutable estimator state lives in a [`stream::RegisterFile`], whose
//! high-water mark is the memory figure the estimators are held to.
//! [`oracles`] computes exact expectations and bounds on small instances,
//! and [`bench`] drives trials, reports and the `streament` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod dist;
pub mod error;
pub mod general;
pub mod numeric;
pub mod oracles;
pub mod simple;
pub mod stream;
pub mod trial;
pub mod two_interval;

pub use dist::{exact_entropy, interval_masses, materialize, Family, FamilySpec, Pmf};
pub use error::{Error, Result};
pub use general::{
    build_partition, gen_cond_exp, gen_est_int, gen_est_prob_int, general_params, iterlog,
    log_star, run_general, theory_constant_check, GeneralConstants, GeneralParams,
    IntervalPartition,
};
pub use oracles::{
    binom_recip_expectation, decompose_entropy, exact_estint_probs, exact_genestint_probs,
    exact_mean_simple, hoeffding_bound, monte_carlo_success, plug_in_estimate,
    random_hoeffding_bound, ClassifierModel,
};
pub use simple::{bias_bound, concentration_bound, run_simple, simple_params, SimpleParams};
pub use stream::{count_in_window, RegisterFile, SymbolStream, WORD_BUDGET};
pub use trial::{run_trial, EstimatorConfig, EstimatorKind, TrialOutcome};
pub use two_interval::{
    cond_exp, est_int, est_prob_int, run_two_interval, two_interval_params, Interval,
    TwoIntervalConstants, TwoIntervalParams,
};
