use super::logreal::LogReal;
use crate::error::{domain, Error, Result};

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BELOW: f64 = 1e-150;

/// Jacobi polynomial `P_n^{(x, y)}(t)` by the three-term recurrence in degree.
///
/// The recurrence is valid for any finite `t`; orthogonality only holds on
/// `[-1, 1]` but the polynomial itself is needed outside it (see
/// [`hyp2f1_via_jacobi`](super::hyp2f1_via_jacobi)).
pub fn jacobi_poly(n: u64, x: f64, y: f64, t: f64) -> Result<f64> {
    jacobi_scaled(n, x, y, t).map(|p| p.to_f64())
}

/// Same recurrence with the running pair rescaled so large degrees or large
/// `|t|` never overflow.
pub(crate) fn jacobi_scaled(n: u64, x: f64, y: f64, t: f64) -> Result<LogReal> {
    if !(x.is_finite() && y.is_finite() && t.is_finite()) {
        return domain(format!("jacobi_poly requires finite parameters, got x={x}, y={y}, t={t}"));
    }
    if n == 0 {
        return Ok(LogReal::ONE);
    }
    let s = x + y;
    let mut prev = 1.0;
    let mut cur = 0.5 * ((x - y) + (s + 2.0) * t);
    let mut log_scale = 0.0;
    for k in 2..=n {
        let k = k as f64;
        let two_k_s = 2.0 * k + s;
        let lead = 2.0 * k * (k + s) * (two_k_s - 2.0);
        if lead == 0.0 {
            return Err(Error::Numeric(format!(
                "Jacobi recurrence degenerates at degree {k} for x={x}, y={y} \
                 (2k (k+x+y) (2k+x+y-2) = 0)"
            )));
        }
        let linear = (two_k_s - 1.0) * (two_k_s * (two_k_s - 2.0) * t + x * x - y * y);
        let back = 2.0 * (k + x - 1.0) * (k + y - 1.0) * two_k_s;
        let next = (linear * cur - back * prev) / lead;
        prev = cur;
        cur = next;
        let size = cur.abs().max(prev.abs());
        if size > RESCALE_ABOVE || (size < RESCALE_BELOW && size > 0.0) {
            let ln_size = size.ln();
            let factor = (-ln_size).exp();
            prev *= factor;
            cur *= factor;
            log_scale += ln_size;
        }
    }
    if !cur.is_finite() {
        return Err(Error::Numeric(format!(
            "Jacobi recurrence overflowed at degree {n} for x={x}, y={y}, t={t}"
        )));
    }
    Ok(LogReal::from_f64(cur).scale_ln(log_scale))
}
