//! Exact Bayesian comparison of two beta-binomial processes.
//!
//! The central question answered here is: given win/loss counts for two
//! processes `A` and `B` and a payout ratio `γ`, what is the posterior
//! probability that `φ_B > γ φ_A`? [`bayes`] evaluates it in closed form
//! through a terminating Gauss hypergeometric series, with an independent
//! double-sum backend and a Monte Carlo oracle for verification.
//!
//! Frequentist baselines live in [`exact_tests`] (Fisher, likelihood ratio,
//! Kolmogorov–Smirnov) and [`sequential`] (gambler's-ruin A/B stopping rule).
//! [`app`] holds the benchmark harness and the `betarate` command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod bayes;
mod error;
pub mod exact_tests;
pub mod sequential;
pub mod specfun;

pub use error::{Error, Result};

pub use bayes::{
    decide, mc_oracle, posterior_from_counts, pr_rate_greater, pr_scaled_double_sum,
    pr_scaled_rate_greater, BetaPosterior, ComparisonResult, Decision, Method, PayoutRatio,
};
pub use exact_tests::{
    fisher_exact_p, fisher_table_probability, ks_two_sample, log_likelihood, wilks_test,
    ContingencyTable, KsResult, LikelihoodConvention, Tail,
};
pub use sequential::{
    design_sequential, power_bound, significance_bound, Lift, Outcome, Prefactor, SequentialConfig,
    SequentialState, SequentialStatus,
};
pub use specfun::LogReal;
