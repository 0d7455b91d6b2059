use crate::error::{domain, Error, Result};

/// Integer posterior `Beta(α, β)` of a rate, with `α = wins + 1` and
/// `β = losses + 1`.
///
/// The closed forms need integer parameters: the outer sum runs to `α_B`
/// and the binomial expansion of `(1 - φ/γ)^{β_A - 1}` must terminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BetaPosterior {
    alpha: u64,
    beta: u64,
}

impl BetaPosterior {
    pub fn new(alpha: u64, beta: u64) -> Result<Self> {
        if alpha < 1 || beta < 1 {
            return domain(format!(
                "posterior parameters must be integers >= 1, got alpha={alpha}, beta={beta}"
            ));
        }
        Ok(Self { alpha, beta })
    }

    /// Uniform prior updated with the observed counts.
    pub fn from_counts(wins: u64, losses: u64) -> Result<Self> {
        let overflow = || Error::Domain("win/loss count too large".into());
        let alpha = wins.checked_add(1).ok_or_else(overflow)?;
        let beta = losses.checked_add(1).ok_or_else(overflow)?;
        Ok(Self { alpha, beta })
    }

    /// Accepts real-valued parameters only when they are whole numbers.
    pub fn from_real(alpha: f64, beta: f64) -> Result<Self> {
        let whole = |v: f64| v.is_finite() && v >= 1.0 && v.fract() == 0.0 && v < 2f64.powi(63);
        if !whole(alpha) || !whole(beta) {
            return domain(format!(
                "closed-form comparison needs integer posterior parameters >= 1 \
                 (finite sums and an exact binomial expansion), got alpha={alpha}, beta={beta}"
            ));
        }
        Self::new(alpha as u64, beta as u64)
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha as f64 / (self.alpha + self.beta) as f64
    }
}

/// Posterior from signed counts, rejecting negatives.
pub fn posterior_from_counts(wins: i64, losses: i64) -> Result<BetaPosterior> {
    if wins < 0 || losses < 0 {
        return domain(format!(
            "win/loss counts must be non-negative, got wins={wins}, losses={losses}"
        ));
    }
    BetaPosterior::from_counts(wins as u64, losses as u64)
}

/// Payout ratio `γ`: A's per-win value over B's. `φ_B > γ φ_A` means B's
/// expected payout is the larger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoutRatio(f64);

impl PayoutRatio {
    pub const ONE: PayoutRatio = PayoutRatio(1.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return domain(format!("payout ratio must be positive and finite, got {gamma}"));
        }
        Ok(Self(gamma))
    }

    pub fn gamma(&self) -> f64 {
        self.0
    }

    pub fn inverse(&self) -> PayoutRatio {
        PayoutRatio(1.0 / self.0)
    }
}

/// Which computation produced a [`ComparisonResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedFormRate,
    ClosedFormScaled,
    DoubleSum,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedFormRate => "closed_form_rate",
            Method::ClosedFormScaled => "closed_form_scaled",
            Method::DoubleSum => "double_sum",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// A probability in `[0, 1]` plus how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonResult {
    pub probability: f64,
    pub method: Method,
    /// Outer summands for the closed forms, `α_B · β_A` for the double sum,
    /// draws for Monte Carlo.
    pub terms_evaluated: u64,
    /// Set when an alternating sum lost more than 12 significant digits.
    pub cancellation_flag: bool,
}
