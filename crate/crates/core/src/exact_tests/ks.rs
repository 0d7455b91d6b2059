use crate::error::{domain, Result};

/// Outcome of a two-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// `sup_x |F_B(x) - F_A(x)|`.
    pub d_stat: f64,
    /// `c(α) √((m_A + m_B) / (m_A m_B))`.
    pub threshold: f64,
    /// `d_stat > threshold`.
    pub reject: bool,
    pub m_a: usize,
    pub m_b: usize,
}

/// `c(α) = √(-½ ln(α/2))`.
pub fn ks_critical_value(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("KS level alpha must lie in (0, 1), got {alpha}"));
    }
    Ok((-0.5 * (alpha / 2.0).ln()).sqrt())
}

fn sorted(samples: &[f64], name: &str) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return domain(format!("{name} is empty"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return domain(format!("{name} contains NaN"));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample KS test at level `alpha`.
///
/// The ECDFs are right-continuous; the gap is measured just after each
/// distinct pooled value, with both samples advanced past ties first.
pub fn ks_two_sample(samples_a: &[f64], samples_b: &[f64], alpha: f64) -> Result<KsResult> {
    let c = ks_critical_value(alpha)?;
    let a = sorted(samples_a, "samples_a")?;
    let b = sorted(samples_b, "samples_b")?;
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d_stat = 0.0f64;
    while i < na || j < nb {
        let x = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        let gap = (i as f64 / na as f64 - j as f64 / nb as f64).abs();
        d_stat = d_stat.max(gap);
    }
    let threshold = c * ((na + nb) as f64 / (na as f64 * nb as f64)).sqrt();
    Ok(KsResult {
        d_stat,
        threshold,
        reject: d_stat > threshold,
        m_a: na,
        m_b: nb,
    })
}
