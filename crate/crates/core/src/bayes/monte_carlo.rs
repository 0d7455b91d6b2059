use rand::SeedableRng;
use rand_distr::{Distribution, Gamma};
use rand_pcg::Pcg64Mcg;
use rayon::prelude::*;

use super::types::{BetaPosterior, ComparisonResult, Method, PayoutRatio};
use crate::error::{domain, Error, Result};

/// Samples per parallel work unit. Only affects scheduling: every sample
/// draws from its own substream.
const BLOCK: u64 = 1 << 14;

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the substream for sample `index`.
pub(crate) fn substream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

struct BetaSampler {
    wins: Gamma<f64>,
    losses: Gamma<f64>,
}

impl BetaSampler {
    fn new(p: BetaPosterior) -> Result<Self> {
        let make = |shape: u64| {
            Gamma::new(shape as f64, 1.0)
                .map_err(|e| Error::Domain(format!("gamma sampler for shape {shape}: {e}")))
        };
        Ok(Self {
            wins: make(p.alpha())?,
            losses: make(p.beta())?,
        })
    }

    /// `X / (X + Y)` with `X ~ Gamma(α)`, `Y ~ Gamma(β)`.
    fn sample(&self, rng: &mut Pcg64Mcg) -> f64 {
        let x = self.wins.sample(rng);
        let y = self.losses.sample(rng);
        x / (x + y)
    }
}

/// Monte Carlo estimate of `Pr(φ_B > γ φ_A)`: the fraction of paired
/// posterior draws with `sample_B > γ · sample_A`.
///
/// Sample `i` uses a generator seeded from `(seed, i)`, so the estimate is
/// bit-identical for fixed inputs whatever the thread count.
pub fn mc_oracle(
    a: BetaPosterior,
    b: BetaPosterior,
    ratio: PayoutRatio,
    n_samples: u64,
    seed: u64,
) -> Result<ComparisonResult> {
    if n_samples == 0 {
        return domain("Monte Carlo oracle needs at least one sample");
    }
    let sampler_a = BetaSampler::new(a)?;
    let sampler_b = BetaSampler::new(b)?;
    let gamma = ratio.gamma();
    let hits: u64 = (0..n_samples.div_ceil(BLOCK))
        .into_par_iter()
        .map(|block| {
            let start = block * BLOCK;
            let end = (start + BLOCK).min(n_samples);
            let mut hits = 0u64;
            for index in start..end {
                let mut rng = Pcg64Mcg::seed_from_u64(substream_seed(seed, index));
                let phi_a = sampler_a.sample(&mut rng);
                let phi_b = sampler_b.sample(&mut rng);
                hits += u64::from(phi_b > gamma * phi_a);
            }
            hits
        })
        .sum();
    Ok(ComparisonResult {
        probability: hits as f64 / n_samples as f64,
        method: Method::MonteCarlo,
        terms_evaluated: n_samples,
        cancellation_flag: false,
    })
}
