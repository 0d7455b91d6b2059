//! Posterior comparison of two beta-binomial processes.
//!
//! A process with `w` wins and `l` losses has posterior rate
//! `φ ~ Beta(w + 1, l + 1)`. The operations here evaluate
//! `Pr(φ_B > φ_A)` and the payout-scaled `Pr(φ_B > γ φ_A)` exactly as
//! finite sums, plus two independent routes to the scaled value (a double
//! sum and a Monte Carlo estimate) used for verification.

mod closed_form;
mod double_sum;
mod monte_carlo;
mod types;

pub use closed_form::{pr_rate_greater, pr_scaled_rate_greater, pr_scaled_rate_greater_with, FTermBackend};
pub use double_sum::pr_scaled_double_sum;
pub use monte_carlo::mc_oracle;
pub(crate) use monte_carlo::splitmix64;
pub use types::{posterior_from_counts, BetaPosterior, ComparisonResult, Method, PayoutRatio};

use crate::error::{domain, Result};

/// Largest `α_B` (number of outer summands) or `β_A` (hypergeometric
/// degree plus one) accepted by the closed forms.
pub const MAX_SUM_PARAMETER: u64 = 100_000;

/// Portfolio choice derived from `Pr(φ_B > γ φ_A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    PreferB,
    PreferA,
    Undecided,
}

/// Prefers `B` when `Pr(φ_B > γ φ_A) >= threshold`, `A` when it is
/// `<= 1 - threshold`, and stays undecided in between.
pub fn decide(
    a: BetaPosterior,
    b: BetaPosterior,
    ratio: PayoutRatio,
    threshold: f64,
) -> Result<Decision> {
    if !(threshold > 0.5 && threshold < 1.0) {
        return domain(format!("decision threshold must lie in (0.5, 1), got {threshold}"));
    }
    let p = pr_scaled_rate_greater(a, b, ratio)?.probability;
    Ok(if p >= threshold {
        Decision::PreferB
    } else if p <= 1.0 - threshold {
        Decision::PreferA
    } else {
        Decision::Undecided
    })
}
