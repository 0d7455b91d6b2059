use super::closed_form::guard;
use super::types::{BetaPosterior, ComparisonResult, Method, PayoutRatio};
use crate::error::{domain, Result};
use crate::specfun::gamma::{ln_beta_unchecked, ln_binomial_unchecked};
use crate::specfun::{LogReal, Sign, SignedLogSum, CANCELLATION_DIGITS};

/// `Pr(φ_B > γ φ_A)` for `γ > 1` from the binomial expansion of
/// `(1 - φ/γ)^{β_A - 1}`, before the inner sum is recognized as a
/// hypergeometric function:
///
/// `Σ_{k<β_A} Σ_{i<α_B} (-1)^k C(β_A-1, k) γ^{-k-α_A} B(α_A+k+i, β_B+1)
///  / ((β_B+i) B(1+i, β_B) B(α_A, β_A))`.
///
/// Intended as an independent check on [`pr_scaled_rate_greater`]
/// (crate::bayes::pr_scaled_rate_greater); the alternating sum in `k` is
/// ill-conditioned for large `β_A` with `γ` near one, which the
/// cancellation flag reports.
pub fn pr_scaled_double_sum(
    a: BetaPosterior,
    b: BetaPosterior,
    ratio: PayoutRatio,
) -> Result<ComparisonResult> {
    let gamma = ratio.gamma();
    if !(gamma > 1.0) {
        return domain(format!("double-sum backend requires gamma > 1, got {gamma}"));
    }
    guard("alpha_b", b.alpha())?;
    guard("beta_a", a.beta())?;

    let alpha_a = a.alpha() as f64;
    let beta_b = b.beta() as f64;
    let ln_gamma_ratio = gamma.ln();
    let ln_norm = ln_beta_unchecked(alpha_a, a.beta() as f64);
    let inner: Vec<f64> = (0..b.alpha())
        .map(|i| {
            let i = i as f64;
            -(beta_b + i).ln() - ln_beta_unchecked(1.0 + i, beta_b)
        })
        .collect();

    let mut pools = SignedLogSum::new();
    for k in 0..a.beta() {
        let sign = if k % 2 == 0 { Sign::Positive } else { Sign::Negative };
        let outer = ln_binomial_unchecked(a.beta() - 1, k)
            - (k as f64 + alpha_a) * ln_gamma_ratio
            - ln_norm;
        for (i, inner_i) in inner.iter().enumerate() {
            let shape = alpha_a + (k + i as u64) as f64;
            let ln_term = outer + ln_beta_unchecked(shape, beta_b + 1.0) + inner_i;
            pools.push(LogReal::new(sign, ln_term));
        }
    }
    let (value, digits_lost) = pools.finish();
    Ok(ComparisonResult {
        probability: value.to_f64().clamp(0.0, 1.0),
        method: Method::DoubleSum,
        terms_evaluated: a.beta() * b.alpha(),
        cancellation_flag: digits_lost > CANCELLATION_DIGITS,
    })
}
