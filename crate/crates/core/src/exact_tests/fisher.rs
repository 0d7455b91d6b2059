use super::ContingencyTable;
use crate::error::{domain, Result};
use crate::specfun::gamma::ln_binomial_unchecked;
use crate::specfun::NeumaierSum;

/// Tables counted as "at least as extreme" as the observed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// `wins_b` at most the observed value.
    SingleLess,
    /// `wins_b` at least the observed value.
    SingleGreater,
    /// Every table no more likely than the observed one.
    TwoSidedMinLikelihood,
}

/// Relative slack when comparing point probabilities for the two-sided
/// rule, so tables tied with the observed one up to rounding are included.
const TIE_TOLERANCE: f64 = 1e-7;

fn ln_point_probability(t: &ContingencyTable) -> f64 {
    ln_binomial_unchecked(t.n_tot(), t.wins_a) + ln_binomial_unchecked(t.o_tot(), t.losses_a)
        - ln_binomial_unchecked(t.m_tot(), t.m_a())
}

/// Hypergeometric probability of the table given its margins:
/// `C(n_tot, wins_a) C(o_tot, losses_a) / C(m_tot, m_a)`.
pub fn fisher_table_probability(t: &ContingencyTable) -> Result<f64> {
    if t.m_tot() == 0 {
        return domain("contingency table is empty");
    }
    Ok(ln_point_probability(t).exp().min(1.0))
}

/// Fisher's exact test p-value under fixed margins, ordering tables by
/// `wins_b`.
pub fn fisher_exact_p(t: &ContingencyTable, tail: Tail) -> Result<f64> {
    if t.m_tot() == 0 {
        return domain("contingency table is empty");
    }
    let observed = t.wins_b;
    let observed_ln = ln_point_probability(t);
    let threshold = observed_ln + TIE_TOLERANCE.ln_1p();
    let p: NeumaierSum = t
        .wins_b_support()
        .filter_map(|x| {
            let ln_p = ln_point_probability(&t.with_wins_b(x));
            let keep = match tail {
                Tail::SingleLess => x <= observed,
                Tail::SingleGreater => x >= observed,
                Tail::TwoSidedMinLikelihood => ln_p <= threshold,
            };
            keep.then(|| ln_p.exp())
        })
        .collect();
    Ok(p.total().clamp(0.0, 1.0))
}
