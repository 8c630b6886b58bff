use std::collections::BTreeMap;

use rayon::prelude::*;

use super::GridFunction;
use crate::dyadic::{pow2, CoeffField, DyadicIndex, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::herz::{deposit, herz_combine, reduce_terms};
use crate::numeric::sorted_sum;
use crate::params::HerzParams;

const CHUNK: usize = 4096;

/// `(Σ_k 2^{kαp} ‖f χ_k‖_q^p)^{1/p}` with `f` read as constant on each cell.
///
/// Cells straddling an annulus boundary are split by exact overlap; cells
/// with a corner at the origin contribute down to the window's tail cutoff.
pub fn herz_norm(f: &GridFunction, hp: &HerzParams, win: &TruncationWindow) -> Result<f64> {
    let spec = *f.spec();
    let dim = spec.dim;
    hp.check_admissible(dim)?;
    win.validate(dim)?;
    let corner = spec.half_extent * (dim as f64).sqrt();
    if corner > pow2(win.k_max) {
        log::warn!(
            "grid reaches radius {corner}, beyond the window's outer annulus radius {}",
            pow2(win.k_max)
        );
    }
    let decay = hp.decay(dim);
    let samples = f.samples();
    let partials: Vec<Result<BTreeMap<i32, f64>>> = samples
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut terms = BTreeMap::new();
            for (j, x) in chunk.iter().enumerate() {
                if *x == 0.0 {
                    continue;
                }
                let cell = spec.cell(c * CHUNK + j);
                deposit(&mut terms, &cell, x.abs().powf(hp.q), decay, win.tail_tol)?;
            }
            Ok(reduce_terms(terms))
        })
        .collect();
    let mut merged: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for part in partials {
        for (k, a) in part? {
            merged.entry(k).or_default().push(a);
        }
    }
    let mass = merged.into_iter().map(|(k, mut v)| (k, sorted_sum(&mut v))).collect();
    Ok(herz_combine(hp, &mass))
}

/// Per-axis list of `(cell index, overlap length)` for `[a, b)`.
fn axis_weights(a: f64, b: f64, half_extent: f64, h: f64, n: usize) -> Vec<(usize, f64)> {
    let first = (((a + half_extent) / h).floor().max(0.0)) as usize;
    let mut out = Vec::new();
    let mut i = first;
    while i < n {
        let lo = -half_extent + i as f64 * h;
        if lo >= b {
            break;
        }
        let len = (lo + h).min(b) - lo.max(a);
        if len > 0.0 {
            out.push((i, len));
        }
        i += 1;
    }
    out
}

/// Cube averages `λ_{v,m}` of `|f|` over every level-`v` cube inside the box.
///
/// The cube side `2^{-v}` must span at least two grid cells.
pub fn coeff_field_from_grid(f: &GridFunction, v: u32) -> Result<CoeffField> {
    let spec = *f.spec();
    let dim = spec.dim;
    let h = spec.spacing();
    let side = pow2(-(v as i32));
    if side < 2.0 * h * (1.0 - 1e-12) {
        return Err(HerzError::Resolution(format!(
            "level {v} cubes of side {side} are finer than two grid cells of width {h}"
        )));
    }
    let r = spec.half_extent;
    let m_lo = (-r / side).ceil() as i64;
    let m_hi = (r / side).floor() as i64; // exclusive
    if m_lo >= m_hi {
        return CoeffField::new(dim);
    }
    let n = spec.points_per_axis();
    let weights: Vec<Vec<(usize, f64)>> = (m_lo..m_hi)
        .map(|m| axis_weights(m as f64 * side, (m + 1) as f64 * side, r, h, n))
        .collect();
    let vol = side.powi(dim as i32);
    let samples = f.samples();
    let span = (m_hi - m_lo) as usize;
    let count = span.pow(dim as u32);
    let values: Vec<(DyadicIndex, f64)> = (0..count)
        .into_par_iter()
        .filter_map(|flat| {
            let (a, b) = (flat % span, flat / span);
            let mut terms = Vec::new();
            if dim == 1 {
                for &(i, w) in &weights[a] {
                    terms.push(samples[i].abs() * w);
                }
            } else {
                for &(j, wy) in &weights[b] {
                    for &(i, wx) in &weights[a] {
                        terms.push(samples[j * n + i].abs() * wx * wy);
                    }
                }
            }
            let avg = sorted_sum(&mut terms) / vol;
            let m = [m_lo + a as i64, if dim == 2 { m_lo + b as i64 } else { 0 }];
            (avg > 0.0).then_some((DyadicIndex { v, m }, avg))
        })
        .collect();
    CoeffField::from_entries(dim, values)
}
