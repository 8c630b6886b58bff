use std::io::BufRead;

use serde::Serialize;

use crate::error::{HerzError, Result};
use crate::numeric::lq_norm;
use crate::params::Exponent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyReport {
    pub delta_norm: f64,
    pub eta_norm: f64,
    pub rhs_norm: f64,
    pub constant: f64,
    pub bound: f64,
}

/// `C(a, q) = 2 (1 − a^t)^{-1/t}` with `t = min(1, q)`.
pub fn hardy_bound(a: f64, q: Exponent) -> f64 {
    let t = q.value().min(1.0);
    2.0 * (1.0 - a.powf(t)).powf(-1.0 / t)
}

/// Forward and backward geometric smoothings
/// `δ_k = Σ_{j≤k} a^{k−j} ε_j`, `η_k = Σ_{j≥k} a^{j−k} ε_j` and their `ℓ^q` norms.
pub fn hardy_sums(eps: &[f64], a: f64, q: Exponent) -> Result<HardyReport> {
    if !(a > 0.0 && a < 1.0) {
        return Err(HerzError::Inadmissible(format!("a must lie in (0, 1), got {a}")));
    }
    if let Some(bad) = eps.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(HerzError::Data(format!("sequence entries must be finite and non-negative, got {bad}")));
    }
    let n = eps.len();
    let mut delta = vec![0.0; n];
    let mut eta = vec![0.0; n];
    let mut run = 0.0;
    for k in 0..n {
        run = a * run + eps[k];
        delta[k] = run;
    }
    run = 0.0;
    for k in (0..n).rev() {
        run = a * run + eps[k];
        eta[k] = run;
    }
    let qv = q.value();
    let rhs_norm = lq_norm(eps, qv);
    let delta_norm = lq_norm(&delta, qv);
    let eta_norm = lq_norm(&eta, qv);
    let constant = if rhs_norm == 0.0 { 0.0 } else { (delta_norm + eta_norm) / rhs_norm };
    Ok(HardyReport { delta_norm, eta_norm, rhs_norm, constant, bound: hardy_bound(a, q) })
}

/// Reads one number per line, skipping blank lines and `#` comments.
pub fn read_sequence<R: BufRead>(r: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let x: f64 = t.parse().map_err(|_| HerzError::Parse(format!("line {}: not a number: {t:?}", no + 1)))?;
        out.push(x);
    }
    Ok(out)
}
