use rayon::prelude::*;
use serde::Serialize;

use super::norm::seq_norm;
use super::norm::seq_norm_unchecked;
use crate::dyadic::{CoeffField, DyadicIndex, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::params::{Exponent, HerzParams, SmoothParams, StarParams};

/// Relative threshold below which maximal-sequence entries are not emitted.
pub const STAR_DROP_TOL: f64 = 1e-14;

/// Largest number of lattice positions per level that [`lambda_star`] evaluates.
pub const MAX_STAR_POSITIONS: u64 = 1 << 24;

/// The Peetre-type maximal sequence
/// `λ*_{v,m} = (Σ_h |λ_{v,h}|^r (1 + |h − m|)^{-d})^{1/r}`
/// on every window lattice position of each level present in `field`.
pub fn lambda_star(field: &CoeffField, st: &StarParams, win: &TruncationWindow) -> Result<CoeffField> {
    let dim = field.dim();
    StarParams::new(st.r, st.d, dim)?;
    win.validate(dim)?;
    field.check_window(win)?;
    let threshold = STAR_DROP_TOL * field.max_abs();
    let mut out = CoeffField::new(dim)?;
    for v in field.levels() {
        let sources: Vec<([i64; 2], f64)> = field.level(v).map(|(i, x)| (i.m, x.abs().powf(st.r))).collect();
        if win.level_size(v, dim) > MAX_STAR_POSITIONS {
            return Err(HerzError::Window(format!(
                "level {v} has {} lattice positions, more than the {MAX_STAR_POSITIONS} a maximal sequence may span",
                win.level_size(v, dim)
            )));
        }
        let (lo, hi) = win.position_range(v);
        let side = (hi - lo) as usize;
        let count = side.pow(dim as u32);
        let values: Vec<(DyadicIndex, f64)> = (0..count)
            .into_par_iter()
            .filter_map(|flat| {
                let mut m = [lo + (flat % side) as i64, 0];
                if dim == 2 {
                    m[1] = lo + (flat / side) as i64;
                }
                let mut terms: Vec<f64> = sources
                    .iter()
                    .map(|(h, w)| {
                        let dx = (h[0] - m[0]) as f64;
                        let dy = (h[1] - m[1]) as f64;
                        w * (1.0 + (dx * dx + dy * dy).sqrt()).powf(-st.d)
                    })
                    .collect();
                let mut val = crate::numeric::sorted_sum(&mut terms).powf(1.0 / st.r);
                let idx = DyadicIndex { v, m };
                // the h = m term alone is |λ_{v,m}|; rounding must not undercut it
                val = val.max(field.get(&idx).abs());
                (val > threshold).then_some((idx, val))
            })
            .collect();
        for (idx, val) in values {
            out.insert(idx, val)?;
        }
    }
    Ok(out)
}

/// `min(q, n/(n/q + α), β)`, the summation exponent used in the equivalence.
pub fn star_exponent(hp: &HerzParams, sp: &SmoothParams, dim: usize) -> f64 {
    let n = dim as f64;
    let mut r = hp.q.min(n / (n / hp.q + hp.alpha));
    if let Exponent::Finite(b) = sp.beta {
        r = r.min(b);
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivReport {
    pub norm_lambda: f64,
    pub norm_lambda_star: f64,
    pub ratio: f64,
    pub r: f64,
    pub d: f64,
}

/// Both sequence norms of `λ` and `λ*` (with `r` from [`star_exponent`]) and
/// their ratio; the ratio is 1 for the zero field.
pub fn lambda_equiv_report(
    field: &CoeffField,
    hp: &HerzParams,
    sp: &SmoothParams,
    d: f64,
    win: &TruncationWindow,
) -> Result<EquivReport> {
    let dim = field.dim();
    hp.check_admissible(dim)?;
    let r = star_exponent(hp, sp, dim);
    let st = StarParams::new(r, d, dim)?;
    let norm_lambda = seq_norm(field, hp, sp, win)?;
    let star = lambda_star(field, &st, win)?;
    let norm_lambda_star = seq_norm_unchecked(&star, hp, sp, win.tail_tol)?;
    let ratio = if norm_lambda == 0.0 {
        1.0
    } else if norm_lambda_star.is_finite() {
        norm_lambda_star / norm_lambda
    } else {
        return Err(HerzError::Construction("maximal sequence norm is not finite".into()));
    };
    Ok(EquivReport { norm_lambda, norm_lambda_star, ratio, r, d })
}
