use crate::error::{domain, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling-series coefficients `B_{2k} / (2k (2k-1))`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this the asymptotic series is not used directly.
const STIRLING_MIN: f64 = 10.0;

/// `ln Γ(x) - [(x - 1/2) ln x - x + ln √(2π)]` for `x >= 10`.
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma requires a positive finite argument, got {x}"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x);
    }
    // Shift up with Γ(x) = Γ(x + n) / (x (x+1) ... (x+n-1)).
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    ln_gamma_unchecked(shifted) - product.ln()
}

/// `ln B(a, b)` for positive `a`, `b`.
///
/// Large arguments go through differences of Stirling corrections rather
/// than subtracting three large `ln Γ` values, and the result is symmetric
/// in its arguments bit for bit.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("ln_beta requires positive finite arguments, got ({a}, {b})"));
    }
    Ok(ln_beta_unchecked(a, b))
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    let p = a.min(b);
    let q = a.max(b);
    let total = p + q;
    if p >= STIRLING_MIN {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(total);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / total).ln()
            + q * (-p / total).ln_1p()
    } else if q >= STIRLING_MIN {
        let corr = stirling_correction(q) - stirling_correction(total);
        ln_gamma_unchecked(p) + corr + p - p * total.ln() + (q - 0.5) * (-p / total).ln_1p()
    } else {
        ln_gamma_unchecked(p) + ln_gamma_unchecked(q) - ln_gamma_unchecked(total)
    }
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return domain(format!("ln_binomial requires k <= n, got n={n}, k={k}"));
    }
    Ok(ln_binomial_unchecked(n, k))
}

pub(crate) fn ln_binomial_unchecked(n: u64, k: u64) -> f64 {
    if k == 0 || k == n {
        return 0.0;
    }
    let n = n as f64;
    let k = k as f64;
    -(n + 1.0).ln() - ln_beta_unchecked(n - k + 1.0, k + 1.0)
}

/// `ln (q)_n` with `(q)_n = q (q+1) ... (q+n-1)` the rising factorial, for
/// `q > 0`.
pub fn ln_pochhammer(q: f64, n: u64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return domain(format!("ln_pochhammer requires q > 0, got {q}"));
    }
    Ok(ln_pochhammer_unchecked(q, n))
}

pub(crate) fn ln_pochhammer_unchecked(q: f64, n: u64) -> f64 {
    if n <= 32 {
        return (0..n).map(|k| (q + k as f64).ln()).sum();
    }
    let nf = n as f64;
    if q >= STIRLING_MIN {
        let end = q + nf;
        (q - 0.5) * (nf / q).ln_1p() + nf * end.ln() - nf + stirling_correction(end)
            - stirling_correction(q)
    } else {
        ln_gamma_unchecked(q + nf) - ln_gamma_unchecked(q)
    }
}
