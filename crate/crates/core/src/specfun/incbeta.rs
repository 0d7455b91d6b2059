use super::gamma::ln_beta_unchecked;
use super::sum::{LogSumExp, NeumaierSum};
use crate::error::{domain, Result};

/// Regularized incomplete beta `I_x(α, β)` for a positive integer `α`.
///
/// Integer `α` collapses the integral to the finite sum
/// `I_x(α, β) = 1 - Σ_{i<α} x^i (1-x)^β / ((β+i) B(1+i, β))`,
/// whose summands are evaluated in log space.
///
/// Below the mean `α/(α+β)` the value is small and `1 - Σ` would return
/// rounding noise, so the same summands are instead added over `i >= α`,
/// where consecutive ratios `x(β+i)/(i+1)` stay below one.
pub fn reg_inc_beta_int(x: f64, alpha: u64, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("reg_inc_beta_int requires x in [0, 1], got {x}"));
    }
    if alpha < 1 {
        return domain("reg_inc_beta_int requires an integer alpha >= 1");
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("reg_inc_beta_int requires beta > 0, got {beta}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_x = x.ln();
    let ln_tail = beta * (-x).ln_1p();
    let ln_summand =
        |i: f64| i * ln_x + ln_tail - (beta + i).ln() - ln_beta_unchecked(1.0 + i, beta);
    let a = alpha as f64;
    if x < a / (a + beta) {
        if let Some(lower) = lower_series(a, beta, x, ln_summand(a)) {
            return Ok(lower.clamp(0.0, 1.0));
        }
    }
    let tail: NeumaierSum = (0..alpha).map(|i| ln_summand(i as f64).exp()).collect();
    Ok((1.0 - tail.total()).clamp(0.0, 1.0))
}

const LOWER_SERIES_MAX_TERMS: u64 = 10_000_000;

/// `Σ_{i>=α} exp(ln s_i)` from the first summand and the term ratio; `None`
/// if it has not converged within the term cap.
fn lower_series(alpha: f64, beta: f64, x: f64, ln_first: f64) -> Option<f64> {
    let ln_x = x.ln();
    let mut pool = LogSumExp::new();
    let mut ln_term = ln_first;
    pool.push(ln_term);
    for k in 0..LOWER_SERIES_MAX_TERMS {
        let i = alpha + k as f64;
        let ln_ratio = ln_x + ((beta + i) / (i + 1.0)).ln();
        ln_term += ln_ratio;
        pool.push(ln_term);
        // later ratios never exceed max(current, x): geometric bound on the rest
        let ln_bound = ln_ratio.max(ln_x);
        if ln_term + ln_bound - (-ln_bound.exp_m1()).ln() < pool.ln() - 39.0 {
            return Some(pool.ln().exp());
        }
    }
    None
}
