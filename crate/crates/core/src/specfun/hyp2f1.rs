//! Terminating Gauss hypergeometric series `₂F₁(-m, b; c; z)`.
//!
//! The series is a degree-`m` polynomial, so it can be rewritten exactly
//! through the connection formulas
//!
//! * Pfaff: `₂F₁(-m, b; c; z) = (1-z)^m ₂F₁(-m, c-b; c; z/(z-1))`
//! * reflection: `₂F₁(-m, b; c; z) = (c-b)_m/(c)_m ₂F₁(-m, b; b-c-m+1; 1-z)`
//!
//! and the reflection followed by Pfaff. Each representation is a finite sum
//! whose positive and negative terms are pooled separately; the route with
//! the least cancellation wins. When `c > b` the Pfaff sum has only positive
//! terms and is used outright, which is always the case for the payout
//! comparison. A route that still loses more than a couple of digits is
//! re-summed in double-double arithmetic.

use super::gamma::{ln_gamma_unchecked, ln_pochhammer_unchecked};
use super::jacobi::jacobi_scaled;
use super::logreal::{LogReal, Sign};
use super::ddouble::DoubleDouble;
use super::sum::SignedLogSum;
use crate::error::{domain, Error, Result};

/// A result is flagged once more than this many decimal digits cancel.
pub const CANCELLATION_DIGITS: f64 = 12.0;

/// Below this many lost digits the direct series is accepted without
/// trying the other representations.
const ROUTE_SWITCH_DIGITS: f64 = 1.0;

/// Cancellation beyond this many digits triggers a double-double re-sum of
/// the chosen route.
const REFINE_DIGITS: f64 = 2.0;

/// Digits gained by double-double over `f64`.
pub const EXTENDED_EXTRA_DIGITS: f64 = 16.0;

/// Which exact rewriting of the polynomial produced a [`SeriesEval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesRoute {
    Direct,
    Pfaff,
    Reflected,
    ReflectedPfaff,
}

/// Value of a terminating series together with its conditioning.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: LogReal,
    /// `log10` of the largest partial pool over the result.
    pub digits_lost: f64,
    pub route: SeriesRoute,
    /// Number of series terms summed.
    pub terms: u64,
    /// The route was re-summed in double-double arithmetic, which carries
    /// [`EXTENDED_EXTRA_DIGITS`] more digits than `f64`.
    pub extended: bool,
}

impl SeriesEval {
    /// More than [`CANCELLATION_DIGITS`] digits were lost.
    pub fn cancelled(&self) -> bool {
        let budget = if self.extended {
            CANCELLATION_DIGITS + EXTENDED_EXTRA_DIGITS
        } else {
            CANCELLATION_DIGITS
        };
        self.digits_lost > budget
    }
}

/// `₂F₁(-m, b; c; z) = Σ_{n=0}^{m} (-1)^n C(m, n) (b)_n / (c)_n z^n`.
pub fn hyp2f1_neg_int_series(m: u64, b: f64, c: f64, z: f64) -> Result<SeriesEval> {
    if !(0.0..1.0).contains(&z) {
        return domain(format!("hyp2f1_neg_int_series requires z in [0, 1), got {z}"));
    }
    hyp2f1_series_with_complement(m, b, c, z, 1.0 - z)
}

/// Variant taking `1 - z` separately, for callers that know it more
/// accurately than `1.0 - z` (e.g. `z = 1/γ` with `γ` close to one).
pub(crate) fn hyp2f1_series_with_complement(
    m: u64,
    b: f64,
    c: f64,
    z: f64,
    one_minus_z: f64,
) -> Result<SeriesEval> {
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("hyp2f1_neg_int_series requires b > 0, got {b}"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("hyp2f1_neg_int_series requires c > 0, got {c}"));
    }
    if !(0.0..1.0).contains(&z) || !(one_minus_z > 0.0 && one_minus_z <= 1.0) {
        return domain(format!("hyp2f1_neg_int_series requires z in [0, 1), got {z}"));
    }
    if m == 0 || z == 0.0 {
        return Ok(SeriesEval {
            value: LogReal::ONE,
            digits_lost: 0.0,
            route: SeriesRoute::Direct,
            terms: 1,
            extended: false,
        });
    }

    let ln_z = z.ln();
    let ln_omz = one_minus_z.ln();
    let (zd, omzd) = (DoubleDouble::from(z), DoubleDouble::from(one_minus_z));
    let md = DoubleDouble::from(m as f64);
    let (bd, cd) = (DoubleDouble::from(b), DoubleDouble::from(c));

    // z / (z - 1) is negative with log-magnitude ln z - ln(1-z).
    let pfaff = Route {
        kind: SeriesRoute::Pfaff,
        b: cd - bd,
        c: cd,
        w_sign: Sign::Negative,
        ln_w: ln_z - ln_omz,
        w: -(zd / omzd),
        prefactor: LogReal::from_ln(m as f64 * ln_omz),
    };
    if c > b {
        return pfaff.evaluate(m);
    }

    let direct = Route {
        kind: SeriesRoute::Direct,
        b: bd,
        c: cd,
        w_sign: Sign::Positive,
        ln_w: ln_z,
        w: zd,
        prefactor: LogReal::ONE,
    };
    let (mut best_route, mut best) = (direct, direct.pooled(m)?);
    if best.digits_lost > ROUTE_SWITCH_DIGITS {
        let mut routes = vec![pfaff];
        let one = DoubleDouble::ONE;
        let reflected_c = bd - cd - md + one;
        let rc = reflected_c.hi;
        let pole = rc <= 0.0 && rc.fract() == 0.0 && -rc < m as f64 && reflected_c.lo == 0.0;
        if !pole {
            let prefactor = reflection_prefactor(m, b, c);
            routes.push(Route {
                kind: SeriesRoute::Reflected,
                b: bd,
                c: reflected_c,
                w_sign: Sign::Positive,
                ln_w: ln_omz,
                w: omzd,
                prefactor,
            });
            routes.push(Route {
                kind: SeriesRoute::ReflectedPfaff,
                b: one - cd - md,
                c: reflected_c,
                w_sign: Sign::Negative,
                ln_w: ln_omz - ln_z,
                w: -(omzd / zd),
                prefactor: prefactor.scale_ln(m as f64 * ln_z),
            });
        }
        for route in routes {
            let candidate = route.pooled(m)?;
            if candidate.digits_lost < best.digits_lost {
                (best_route, best) = (route, candidate);
            }
        }
    }
    if best.digits_lost > REFINE_DIGITS {
        if let Some(refined) = best_route.extended(m) {
            best.value = refined;
            best.extended = true;
        }
    }
    Ok(best)
}

/// One exact rewriting `prefactor · Σ_n (-1)^n C(m, n) (b)_n / (c)_n w^n`.
/// `w` is carried both as a signed log and as a double-double.
#[derive(Debug, Clone, Copy)]
struct Route {
    kind: SeriesRoute,
    b: DoubleDouble,
    c: DoubleDouble,
    w_sign: Sign,
    ln_w: f64,
    w: DoubleDouble,
    prefactor: LogReal,
}

impl Route {
    fn pooled(&self, m: u64) -> Result<SeriesEval> {
        let (sum, digits_lost) = terminating_sum(m, self.b.hi, self.c.hi, self.w_sign, self.ln_w)?;
        Ok(SeriesEval {
            value: self.prefactor * sum,
            digits_lost,
            route: self.kind,
            terms: m + 1,
            extended: false,
        })
    }

    fn evaluate(&self, m: u64) -> Result<SeriesEval> {
        let mut eval = self.pooled(m)?;
        if eval.digits_lost > REFINE_DIGITS {
            if let Some(refined) = self.extended(m) {
                eval.value = refined;
                eval.extended = true;
            }
        }
        Ok(eval)
    }

    /// The sum in double-double arithmetic, or `None` when the terms leave
    /// the `f64` exponent range.
    fn extended(&self, m: u64) -> Option<LogReal> {
        let minus_w = -self.w;
        let mut term = DoubleDouble::ONE;
        let mut sum = term;
        for n in 0..m {
            let nf = DoubleDouble::from(n as f64);
            let upper = self.b + nf;
            if upper.is_zero() {
                break;
            }
            let lower = self.c + nf;
            let count = DoubleDouble::from((m - n) as f64);
            term = term * (count * upper) / ((nf + DoubleDouble::ONE) * lower) * minus_w;
            sum = sum + term;
            if !(term.hi.is_finite() && term.hi.abs() < 1e300) {
                return None;
            }
        }
        if sum.is_zero() {
            return None;
        }
        Some(self.prefactor * LogReal::from_f64(sum.to_f64()))
    }
}

/// `(c - b)_m / (c)_m` as a signed log value.
fn reflection_prefactor(m: u64, b: f64, c: f64) -> LogReal {
    let mut negative = false;
    let mut ln_mag = 0.0;
    for k in 0..m {
        let factor = c - b + k as f64;
        if factor == 0.0 {
            return LogReal::ZERO;
        }
        negative ^= factor < 0.0;
        ln_mag += factor.abs().ln();
    }
    let sign = if negative { Sign::Negative } else { Sign::Positive };
    LogReal::new(sign, ln_mag - ln_pochhammer_unchecked(c, m))
}

/// `Σ_{n=0}^{m} (-1)^n C(m, n) (b)_n / (c)_n w^n` with `w = sign · exp(ln_w)`,
/// built term by term from the ratio of consecutive terms. Returns the sum
/// and the digits lost between the positive and negative pools.
fn terminating_sum(m: u64, b: f64, c: f64, w_sign: Sign, ln_w: f64) -> Result<(LogReal, f64)> {
    let mut pools = SignedLogSum::new();
    let mut term = LogReal::ONE;
    pools.push(term);
    // -w has the opposite sign of w.
    let step_negative = w_sign == Sign::Positive;
    for n in 0..m {
        let nf = n as f64;
        let upper = b + nf;
        let lower = c + nf;
        if upper == 0.0 {
            break;
        }
        if lower == 0.0 {
            return Err(Error::Numeric(format!(
                "terminating series hits a pole: (c)_n vanishes at n={n} for c={c}"
            )));
        }
        let ratio = ((m - n) as f64 * upper) / ((nf + 1.0) * lower);
        let negative = step_negative ^ (ratio < 0.0);
        let magnitude = term.log_magnitude() + ratio.abs().ln() + ln_w;
        let sign = match (term.sign(), negative) {
            (Sign::Positive, false) | (Sign::Negative, true) => Sign::Positive,
            _ => Sign::Negative,
        };
        term = LogReal::new(sign, magnitude);
        pools.push(term);
    }
    Ok(pools.finish())
}

/// `₂F₁(1-β_A, a; a+β_B+1; z)` through a Jacobi polynomial.
///
/// After a Pfaff transformation the function equals
/// `(1-z)^m m! / (x+1)_m · P_m^{(x, y)}((1+z)/(1-z))` with `m = β_A - 1`,
/// `x = a + β_B`, `y = -m - a`. The degree recurrence then has
/// `x + y = β_B - β_A + 1 >= 1`, so it is free of vanishing denominators
/// exactly when `β_B >= β_A`; smaller `β_B` is refused.
pub fn hyp2f1_via_jacobi(beta_a: u64, a: f64, beta_b: u64, z: f64) -> Result<LogReal> {
    if !(z > 0.0 && z < 1.0) {
        return domain(format!("hyp2f1_via_jacobi requires z in (0, 1), got {z}"));
    }
    hyp2f1_via_jacobi_with_complement(beta_a, a, beta_b, z, 1.0 - z)
}

pub(crate) fn hyp2f1_via_jacobi_with_complement(
    beta_a: u64,
    a: f64,
    beta_b: u64,
    z: f64,
    one_minus_z: f64,
) -> Result<LogReal> {
    if beta_a < 2 {
        return domain(format!("hyp2f1_via_jacobi requires beta_a >= 2, got {beta_a}"));
    }
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("hyp2f1_via_jacobi requires a > 0, got {a}"));
    }
    if !(z > 0.0 && z < 1.0) {
        return domain(format!("hyp2f1_via_jacobi requires z in (0, 1), got {z}"));
    }
    if beta_b < beta_a {
        return Err(Error::UnsupportedDomain(format!(
            "Jacobi route needs beta_b >= beta_a, got beta_a={beta_a}, beta_b={beta_b}; \
             use the series backend"
        )));
    }
    let m = beta_a - 1;
    let mf = m as f64;
    let x = a + beta_b as f64;
    let y = -mf - a;
    let t = (1.0 + z) / one_minus_z;
    let poly = jacobi_scaled(m, x, y, t)?;
    if poly.sign() != Sign::Positive {
        return Err(Error::Numeric(format!(
            "Jacobi route produced a non-positive polynomial value {poly} for \
             beta_a={beta_a}, a={a}, beta_b={beta_b}, z={z}"
        )));
    }
    let ln_prefactor =
        mf * one_minus_z.ln() + ln_gamma_unchecked(mf + 1.0) - ln_pochhammer_unchecked(x + 1.0, m);
    Ok(poly.scale_ln(ln_prefactor))
}
