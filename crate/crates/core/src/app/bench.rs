use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use super::report::{BenchmarkCase, BenchmarkReport};
use crate::bayes::{
    mc_oracle, pr_scaled_rate_greater, splitmix64, BetaPosterior, PayoutRatio, MAX_SUM_PARAMETER,
};
use crate::error::{domain, Error, Result};

/// Candidate draws allowed before parameter generation gives up.
pub const GENERATION_RETRY_CAP: u64 = 1_000_000;

/// Stream tag separating the parameter generator from the Monte Carlo seeds.
const PARAMETER_STREAM: u64 = 0x6265_6e63_6870_6172;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParameters {
    pub a: BetaPosterior,
    pub b: BetaPosterior,
    pub gamma: PayoutRatio,
}

/// `floor(1/u + 1)` for `u` uniform on `(0, 1]`.
fn reciprocal_draw(rng: &mut Pcg64Mcg) -> u64 {
    let u = 1.0 - rng.random::<f64>();
    // saturates for vanishing u; such draws are rejected by the size guard
    (1.0 / u + 1.0).floor() as u64
}

/// Draws `n_cases` accepted parameter sets. Five reciprocal-uniform integers
/// `(α_A, β_A, α_B, β_B, γ)` are drawn per candidate; a candidate is kept when
/// `α_A <= β_A`, `α_B <= β_B`, `γ > 1` and every integer fits the closed-form
/// size guard.
pub fn draw_case_parameters(n_cases: usize, seed: u64) -> Result<Vec<CaseParameters>> {
    let mut rng = Pcg64Mcg::seed_from_u64(splitmix64(seed ^ PARAMETER_STREAM));
    let mut out = Vec::with_capacity(n_cases);
    let mut draws = 0u64;
    while out.len() < n_cases {
        if draws == GENERATION_RETRY_CAP {
            return Err(Error::Generation(format!(
                "accepted {} of {n_cases} cases in {GENERATION_RETRY_CAP} draws",
                out.len()
            )));
        }
        draws += 1;
        let v: [u64; 5] = std::array::from_fn(|_| reciprocal_draw(&mut rng));
        let [alpha_a, beta_a, alpha_b, beta_b, gamma] = v;
        if alpha_a > beta_a || alpha_b > beta_b || gamma <= 1 {
            continue;
        }
        if v.iter().any(|&x| x > MAX_SUM_PARAMETER) {
            continue;
        }
        out.push(CaseParameters {
            a: BetaPosterior::new(alpha_a, beta_a)?,
            b: BetaPosterior::new(alpha_b, beta_b)?,
            gamma: PayoutRatio::new(gamma as f64)?,
        });
    }
    Ok(out)
}

/// Times the closed form against the Monte Carlo oracle on `n_cases`
/// generated cases.
///
/// Case parameters depend only on `seed`; case `i` seeds its oracle with
/// `splitmix64(seed + i)`. The closed form is called once untimed before the
/// measured call.
pub fn run_benchmark(n_cases: usize, mc_samples: u64, seed: u64) -> Result<BenchmarkReport> {
    if n_cases == 0 {
        return domain("benchmark needs at least one case");
    }
    if mc_samples < 1000 {
        return domain(format!("benchmark needs at least 1000 Monte Carlo samples, got {mc_samples}"));
    }
    let params = draw_case_parameters(n_cases, seed)?;
    let mut cases = Vec::with_capacity(n_cases);
    for (i, p) in params.iter().enumerate() {
        pr_scaled_rate_greater(p.a, p.b, p.gamma)?;
        let start = Instant::now();
        let closed = pr_scaled_rate_greater(p.a, p.b, p.gamma)?;
        let closed_form_nanos = start.elapsed().as_nanos() as u64;

        let mc_seed = splitmix64(seed.wrapping_add(i as u64));
        let start = Instant::now();
        let mc = mc_oracle(p.a, p.b, p.gamma, mc_samples, mc_seed)?;
        let mc_nanos = start.elapsed().as_nanos() as u64;

        cases.push(BenchmarkCase {
            alpha_a: p.a.alpha(),
            beta_a: p.a.beta(),
            alpha_b: p.b.alpha(),
            beta_b: p.b.beta(),
            gamma: p.gamma.gamma(),
            closed_form: closed.probability,
            mc_estimate: mc.probability,
            closed_form_nanos,
            mc_nanos,
        });
    }
    Ok(BenchmarkReport::from_cases(seed, mc_samples, cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_cases_satisfy_acceptance_rule() {
        let params = draw_case_parameters(200, 11).unwrap();
        assert_eq!(params.len(), 200);
        for p in &params {
            assert!(p.a.alpha() <= p.a.beta());
            assert!(p.b.alpha() <= p.b.beta());
            assert!(p.gamma.gamma() >= 2.0 && p.gamma.gamma().fract() == 0.0);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(draw_case_parameters(20, 5).unwrap(), draw_case_parameters(20, 5).unwrap());
        assert_ne!(draw_case_parameters(20, 5).unwrap(), draw_case_parameters(20, 6).unwrap());
    }

    #[test]
    fn minimal_run() {
        let r = run_benchmark(1, 1000, 3).unwrap();
        assert_eq!(r.cases.len(), 1);
        let c = &r.cases[0];
        assert!((0.0..=1.0).contains(&c.closed_form) && (0.0..=1.0).contains(&c.mc_estimate));
        assert_eq!(r.max_abs_diff, c.abs_diff());
        let again = run_benchmark(1, 1000, 3).unwrap();
        assert_eq!(again.cases[0].mc_estimate, c.mc_estimate);
        assert_eq!(again.cases[0].alpha_a, c.alpha_a);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(run_benchmark(0, 1000, 1).is_err());
        assert!(run_benchmark(1, 999, 1).is_err());
    }
}
