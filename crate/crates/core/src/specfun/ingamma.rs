use super::gamma::ln_gamma_unchecked;
use crate::error::{domain, Error, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;

/// Regularized upper incomplete gamma `Q(s, x) = Γ(s, x) / Γ(s)`.
///
/// Power series for `x < s + 1`, Lentz continued fraction otherwise.
pub fn reg_inc_gamma_upper(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return domain(format!("reg_inc_gamma_upper requires s > 0, got {s}"));
    }
    if !(x >= 0.0) {
        return domain(format!("reg_inc_gamma_upper requires x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let log_prefactor = s * x.ln() - x - ln_gamma_unchecked(s);
    let q = if x < s + 1.0 {
        1.0 - lower_series(s, x, log_prefactor)?
    } else {
        upper_fraction(s, x, log_prefactor)?
    };
    Ok(q.clamp(0.0, 1.0))
}

fn lower_series(s: f64, x: f64, log_prefactor: f64) -> Result<f64> {
    let mut denom = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum * log_prefactor.exp());
        }
    }
    Err(Error::Numeric(format!(
        "incomplete gamma series did not converge for s={s}, x={x}"
    )))
}

fn upper_fraction(s: f64, x: f64, log_prefactor: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(log_prefactor.exp() * h);
        }
    }
    Err(Error::Numeric(format!(
        "incomplete gamma continued fraction did not converge for s={s}, x={x}"
    )))
}
