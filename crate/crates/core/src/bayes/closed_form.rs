use super::types::{BetaPosterior, ComparisonResult, Method, PayoutRatio};
use super::MAX_SUM_PARAMETER;
use crate::error::{Error, Result};
use crate::specfun::gamma::ln_beta_unchecked;
use crate::specfun::{
    hyp2f1_series_with_complement, hyp2f1_via_jacobi_with_complement, NeumaierSum,
};

/// How the hypergeometric factor of each summand is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FTermBackend {
    /// Terminating series (canonical).
    #[default]
    Series,
    /// Jacobi-polynomial route; needs `β_B >= β_A >= 2`.
    Jacobi,
    /// Series, with every term re-evaluated through the Jacobi route when
    /// `β_B >= β_A >= 2`. A relative disagreement above `1e-9` raises the
    /// cancellation flag.
    CrossChecked,
}

const JACOBI_AGREEMENT: f64 = 1e-9;

pub(crate) fn guard(name: &'static str, value: u64) -> Result<()> {
    if value > MAX_SUM_PARAMETER {
        Err(Error::TooLarge {
            name,
            value,
            limit: MAX_SUM_PARAMETER,
        })
    } else {
        Ok(())
    }
}

/// `Pr(φ_B > φ_A)` as `Σ_{i=1}^{α_B} exp(S_i)` with
/// `S_i = ln B(α_A-1+i, β_B+β_A) - ln B(i, β_B) - ln(β_B-1+i) - ln B(α_A, β_A)`.
///
/// Every factor, the normalizing `1/B(α_A, β_A)` included, stays inside the
/// exponent.
pub fn pr_rate_greater(a: BetaPosterior, b: BetaPosterior) -> Result<ComparisonResult> {
    guard("alpha_b", b.alpha())?;
    let alpha_a = a.alpha() as f64;
    let beta_a = a.beta() as f64;
    let beta_b = b.beta() as f64;
    let ln_norm = ln_beta_unchecked(alpha_a, beta_a);
    let sum: NeumaierSum = (1..=b.alpha())
        .map(|i| {
            let i = i as f64;
            let s = ln_beta_unchecked(alpha_a - 1.0 + i, beta_b + beta_a)
                - ln_beta_unchecked(i, beta_b)
                - (beta_b - 1.0 + i).ln()
                - ln_norm;
            s.exp()
        })
        .collect();
    Ok(ComparisonResult {
        probability: sum.total().clamp(0.0, 1.0),
        method: Method::ClosedFormRate,
        terms_evaluated: b.alpha(),
        cancellation_flag: false,
    })
}

/// `Pr(φ_B > γ φ_A)`.
///
/// For `γ > 1` this is
/// `Σ_{i<α_B} exp{C + S(α_A+i, β_B, i) + F(α_A+i)}` with
/// `C = -α_A ln γ - ln B(α_A, β_A)`,
/// `S(a, β_B, i) = ln B(a, β_B+1) - ln B(1+i, β_B) - ln(β_B+i)` and
/// `F(a) = ln ₂F₁(1-β_A, a; a+β_B+1; 1/γ)`.
/// `γ = 1` delegates to [`pr_rate_greater`]; `γ < 1` uses
/// `1 - Pr(φ_A > φ_B / γ)` with the roles swapped.
pub fn pr_scaled_rate_greater(
    a: BetaPosterior,
    b: BetaPosterior,
    ratio: PayoutRatio,
) -> Result<ComparisonResult> {
    pr_scaled_rate_greater_with(a, b, ratio, FTermBackend::Series)
}

/// [`pr_scaled_rate_greater`] with an explicit hypergeometric backend.
pub fn pr_scaled_rate_greater_with(
    a: BetaPosterior,
    b: BetaPosterior,
    ratio: PayoutRatio,
    backend: FTermBackend,
) -> Result<ComparisonResult> {
    let gamma = ratio.gamma();
    if gamma == 1.0 {
        return pr_rate_greater(a, b);
    }
    if gamma < 1.0 {
        let mut swapped = pr_scaled_rate_greater_with(b, a, ratio.inverse(), backend)?;
        swapped.probability = (1.0 - swapped.probability).clamp(0.0, 1.0);
        return Ok(swapped);
    }
    scaled_sum(a, b, gamma, backend)
}

fn scaled_sum(
    a: BetaPosterior,
    b: BetaPosterior,
    gamma: f64,
    backend: FTermBackend,
) -> Result<ComparisonResult> {
    guard("alpha_b", b.alpha())?;
    guard("beta_a", a.beta())?;
    let jacobi_ok = b.beta() >= a.beta() && a.beta() >= 2;
    if backend == FTermBackend::Jacobi && !jacobi_ok {
        return Err(Error::UnsupportedDomain(format!(
            "Jacobi backend needs beta_b >= beta_a >= 2, got beta_a={}, beta_b={}",
            a.beta(),
            b.beta()
        )));
    }

    let alpha_a = a.alpha() as f64;
    let beta_b = b.beta() as f64;
    let degree = a.beta() - 1;
    let z = 1.0 / gamma;
    let one_minus_z = (gamma - 1.0) / gamma;
    let c_term = -alpha_a * gamma.ln() - ln_beta_unchecked(alpha_a, a.beta() as f64);

    let mut sum = NeumaierSum::new();
    let mut flagged = false;
    for i in 0..b.alpha() {
        let fi = i as f64;
        let shape = alpha_a + fi;
        let s_term = ln_beta_unchecked(shape, beta_b + 1.0)
            - ln_beta_unchecked(1.0 + fi, beta_b)
            - (beta_b + fi).ln();
        let f_term = match backend {
            FTermBackend::Jacobi => {
                hyp2f1_via_jacobi_with_complement(a.beta(), shape, b.beta(), z, one_minus_z)?
                    .log_magnitude()
            }
            FTermBackend::Series | FTermBackend::CrossChecked => {
                let eval = hyp2f1_series_with_complement(
                    degree,
                    shape,
                    shape + beta_b + 1.0,
                    z,
                    one_minus_z,
                )?;
                flagged |= eval.cancelled();
                if backend == FTermBackend::CrossChecked && jacobi_ok {
                    let check = hyp2f1_via_jacobi_with_complement(
                        a.beta(),
                        shape,
                        b.beta(),
                        z,
                        one_minus_z,
                    )?;
                    let rel = (check.log_magnitude() - eval.value.log_magnitude()).exp_m1().abs();
                    flagged |= !(rel <= JACOBI_AGREEMENT);
                }
                eval.value.ln().ok_or_else(|| {
                    Error::Numeric(format!(
                        "hypergeometric factor is non-positive at i={i} ({})",
                        eval.value
                    ))
                })?
            }
        };
        sum.add((c_term + s_term + f_term).exp());
    }
    Ok(ComparisonResult {
        probability: sum.total().clamp(0.0, 1.0),
        method: Method::ClosedFormScaled,
        terms_evaluated: b.alpha(),
        cancellation_flag: flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn post(alpha: u64, beta: u64) -> BetaPosterior {
        BetaPosterior::new(alpha, beta).unwrap()
    }

    fn ratio(g: f64) -> PayoutRatio {
        PayoutRatio::new(g).unwrap()
    }

    #[test]
    fn rate_examples() {
        let r = pr_rate_greater(post(1, 1), post(1, 1)).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-15);
        assert_eq!(r.method, Method::ClosedFormRate);
        assert_eq!(r.terms_evaluated, 1);
        // ∫₀¹ (1 - φ²) dφ
        let r = pr_rate_greater(post(1, 1), post(2, 1)).unwrap();
        assert!((r.probability - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.terms_evaluated, 2);
    }

    #[test]
    fn scaled_examples() {
        // ∫₀^{1/2} (1 - 2φ) dφ
        let r = pr_scaled_rate_greater(post(1, 1), post(1, 1), ratio(2.0)).unwrap();
        assert!((r.probability - 0.25).abs() < 1e-15);
        assert_eq!(r.method, Method::ClosedFormScaled);
        let delegated = pr_scaled_rate_greater(post(1, 1), post(2, 1), PayoutRatio::ONE).unwrap();
        assert_eq!(delegated, pr_rate_greater(post(1, 1), post(2, 1)).unwrap());
    }

    #[test]
    fn complement_dispatch_below_one() {
        let low = pr_scaled_rate_greater(post(2, 4), post(3, 3), ratio(0.5)).unwrap();
        let high = pr_scaled_rate_greater(post(3, 3), post(2, 4), ratio(2.0)).unwrap();
        assert!((low.probability - (1.0 - high.probability)).abs() < 1e-12);
    }

    #[test]
    fn uniform_posteriors_large_gamma() {
        // Two uniforms: Pr(φ_B > γ φ_A) = 1/(2γ) for γ >= 1.
        for g in [1.5, 3.0, 10.0, 1e3, 1e6] {
            let r = pr_scaled_rate_greater(post(1, 1), post(1, 1), ratio(g)).unwrap();
            assert!((r.probability - 0.5 / g).abs() < 1e-15, "γ={g}");
        }
    }

    #[test]
    fn backends_agree_on_small_case() {
        let (a, b, g) = (post(3, 4), post(5, 6), ratio(1.7));
        let series = pr_scaled_rate_greater(a, b, g).unwrap();
        let jacobi = pr_scaled_rate_greater_with(a, b, g, FTermBackend::Jacobi).unwrap();
        let checked = pr_scaled_rate_greater_with(a, b, g, FTermBackend::CrossChecked).unwrap();
        assert!((series.probability - jacobi.probability).abs() < 1e-13);
        assert_eq!(series.probability, checked.probability);
        assert!(!checked.cancellation_flag);
        assert!(matches!(
            pr_scaled_rate_greater_with(post(3, 6), post(5, 4), g, FTermBackend::Jacobi),
            Err(Error::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn size_guard() {
        let big = post(MAX_SUM_PARAMETER + 1, 2);
        assert!(matches!(
            pr_rate_greater(post(1, 1), big),
            Err(Error::TooLarge { name: "alpha_b", .. })
        ));
        let wide = post(2, MAX_SUM_PARAMETER + 1);
        assert!(matches!(
            pr_scaled_rate_greater(wide, post(1, 1), ratio(2.0)),
            Err(Error::TooLarge { name: "beta_a", .. })
        ));
        // Huge α_A is fine: it only enters through ln B. With φ_A ~ Beta(n, 1)
        // and φ_B ~ Beta(3, 1), Pr(φ_B > φ_A) = 1 - n/(n+3).
        let n = 1_000_001.0;
        let r = pr_rate_greater(post(1_000_001, 1), post(3, 1)).unwrap();
        assert!((r.probability - 3.0 / (n + 3.0)).abs() < 1e-9 * r.probability);
    }
}
