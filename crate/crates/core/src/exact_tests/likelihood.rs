use super::ContingencyTable;
use crate::error::{domain, Result};
use crate::specfun::gamma::ln_beta_unchecked;
use crate::specfun::reg_inc_gamma_upper;

/// How cell counts map to gamma-function arguments in the log-likelihood.
///
/// `BetaOfCounts` uses `ln B(n_tot, o_tot) - Σ_i ln B(n_i, o_i)` with the
/// counts as arguments. That is `Γ(count)` where the hypergeometric
/// probability has `Γ(count + 1)`, so it differs from the log-probability by
///
/// `ℓ_beta = ln Pr - ln n_tot - ln o_tot + ln m_tot + Σ_i (ln n_i + ln o_i - ln m_i)`
///
/// and needs every cell to be at least one. `Factorial` uses
/// `Γ(count + 1)` and equals `ln` of
/// [`fisher_table_probability`](super::fisher_table_probability).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LikelihoodConvention {
    #[default]
    BetaOfCounts,
    Factorial,
}

/// Log-likelihood of a 2×2 table under the chosen convention.
pub fn log_likelihood(t: &ContingencyTable, convention: LikelihoodConvention) -> Result<f64> {
    let offset = match convention {
        LikelihoodConvention::BetaOfCounts => {
            if t.wins_a == 0 || t.losses_a == 0 || t.wins_b == 0 || t.losses_b == 0 {
                return domain(format!(
                    "beta-of-counts log-likelihood needs every cell >= 1, got {t:?}; \
                     add one to each cell or use the factorial convention"
                ));
            }
            0.0
        }
        LikelihoodConvention::Factorial => {
            if t.m_tot() == 0 {
                return domain("contingency table is empty");
            }
            1.0
        }
    };
    let lb = |n: u64, o: u64| ln_beta_unchecked(n as f64 + offset, o as f64 + offset);
    let mut ell = lb(t.n_tot(), t.o_tot()) - lb(t.wins_a, t.losses_a) - lb(t.wins_b, t.losses_b);
    if convention == LikelihoodConvention::Factorial {
        // B(n+1, o+1) = n! o! / (m+1)!, so each beta carries an extra 1/(m+1).
        let m = |trials: u64| (trials as f64 + 1.0).ln();
        ell += m(t.m_tot()) - m(t.m_a()) - m(t.m_b());
    }
    Ok(ell)
}

/// Wilks likelihood-ratio test between nested models.
///
/// Returns `D = 2 (ℓ₁ - ℓ₀)` and the `χ²` survival probability of `D` with
/// `dof_delta` degrees of freedom.
pub fn wilks_test(ell_h1: f64, ell_h0: f64, dof_delta: u32) -> Result<(f64, f64)> {
    if !(ell_h1.is_finite() && ell_h0.is_finite()) {
        return domain("log-likelihoods must be finite");
    }
    if ell_h1 < ell_h0 {
        return domain(format!(
            "nested models need ell_h1 >= ell_h0, got ell_h1={ell_h1}, ell_h0={ell_h0}"
        ));
    }
    if dof_delta == 0 {
        return domain("dof_delta must be at least 1");
    }
    let d = 2.0 * (ell_h1 - ell_h0);
    let p = reg_inc_gamma_upper(dof_delta as f64 / 2.0, d / 2.0)?;
    Ok((d, p))
}
