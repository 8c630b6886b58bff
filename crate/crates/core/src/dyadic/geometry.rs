//! Exact measures of boxes intersected with balls and dyadic annuli.

use super::{check_dim, pow2, AnnulusIndex, CoeffField, DyadicIndex};
use crate::error::{HerzError, Result};

/// A half-open axis-aligned box `Π [lo_i, hi_i)` in dimension 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub dim: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Cell {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Cell { dim: 1, lo: [lo, 0.0], hi: [hi, 0.0] }
    }

    pub fn rect(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Cell { dim: 2, lo, hi }
    }

    pub fn measure(&self) -> f64 {
        (0..self.dim).map(|i| self.hi[i] - self.lo[i]).product()
    }

    /// Distance from the origin to the closure of the box.
    pub fn min_radius(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let d = if self.lo[i] > 0.0 {
                self.lo[i]
            } else if self.hi[i] < 0.0 {
                -self.hi[i]
            } else {
                0.0
            };
            acc += d * d;
        }
        acc.sqrt()
    }

    /// Supremum of `|x|` over the box.
    pub fn max_radius(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let d = self.lo[i].abs().max(self.hi[i].abs());
            acc += d * d;
        }
        acc.sqrt()
    }

    pub fn touches_origin(&self) -> bool {
        (0..self.dim).all(|i| self.lo[i] <= 0.0 && self.hi[i] >= 0.0)
    }

    /// Measure of the box intersected with the open ball `|x| < rho`.
    pub fn ball_measure(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        if self.max_radius() <= rho {
            return self.measure();
        }
        if self.min_radius() >= rho {
            return 0.0;
        }
        match self.dim {
            1 => (self.hi[0].min(rho) - self.lo[0].max(-rho)).max(0.0),
            _ => rect_disk_area(self.lo, self.hi, rho),
        }
    }

    /// Measure of the box intersected with `C_k`.
    pub fn annulus_overlap(&self, k: i32) -> f64 {
        let outer = self.ball_measure(pow2(k));
        let inner = self.ball_measure(pow2(k - 1));
        (outer - inner).max(0.0)
    }

    /// The annuli the box meets in positive measure, `(k_lo, k_hi)`.
    /// `k_lo` is `None` when the box touches the origin, since it then meets
    /// every `C_k` with `k ≤ k_hi`.
    pub fn annulus_range(&self) -> (Option<i32>, i32) {
        let k_hi = ceil_log2(self.max_radius());
        let rmin = self.min_radius();
        if rmin == 0.0 {
            (None, k_hi)
        } else {
            // smallest k with 2^k > rmin
            (Some(floor_log2(rmin) + 1), k_hi)
        }
    }
}

/// Largest `j` with `2^j ≤ x`, for `x > 0`.
pub(crate) fn floor_log2(x: f64) -> i32 {
    let mut j = x.log2().floor() as i32;
    while pow2(j) > x {
        j -= 1;
    }
    while pow2(j + 1) <= x {
        j += 1;
    }
    j
}

/// Smallest `j` with `x ≤ 2^j`, for `x > 0`.
pub(crate) fn ceil_log2(x: f64) -> i32 {
    let mut j = x.log2().ceil() as i32;
    while pow2(j) < x {
        j += 1;
    }
    while pow2(j - 1) >= x {
        j -= 1;
    }
    j
}

/// `∫_{u1}^{u2} sqrt(rho² − t²) dt` for `0 ≤ u1 ≤ u2 ≤ rho`, arranged so
/// that nearby endpoints do not cancel catastrophically.
fn circle_segment_integral(u1: f64, u2: f64, rho: f64) -> f64 {
    if u2 <= u1 {
        return 0.0;
    }
    let s1 = (rho * rho - u1 * u1).max(0.0).sqrt();
    let s2 = (rho * rho - u2 * u2).max(0.0).sqrt();
    let du = u2 - u1;
    // u2 s2 − u1 s1 = du s2 + u1 (s2 − s1), with s2 − s1 = −du (u1 + u2) / (s1 + s2)
    let ts = if s1 + s2 > 0.0 { du * s2 - u1 * du * (u1 + u2) / (s1 + s2) } else { 0.0 };
    let (a1, a2) = (u1 / rho, u2 / rho);
    let c1 = (1.0 - a1 * a1).max(0.0).sqrt();
    let c2 = (1.0 - a2 * a2).max(0.0).sqrt();
    let dasin = (a2 * c1 - a1 * c2).clamp(-1.0, 1.0).asin();
    0.5 * ts + 0.5 * rho * rho * dasin
}

/// Area of `[a, b] × [c, d]` inside the disk of radius `rho`, all bounds non-negative.
fn quadrant_rect_disk(a: f64, b: f64, c: f64, d: f64, rho: f64) -> f64 {
    if b <= a || d <= c || a >= rho || c >= rho {
        return 0.0;
    }
    let b = b.min(rho);
    // h(t) = sqrt(rho² − t²) crosses d at t_d and c at t_c
    let t_d = if d >= rho { 0.0 } else { (rho * rho - d * d).sqrt() };
    let t_c = (rho * rho - c * c).sqrt();
    let full_hi = b.min(t_d);
    let full = if full_hi > a { (d - c) * (full_hi - a) } else { 0.0 };
    let u1 = a.max(t_d);
    let u2 = b.min(t_c);
    let partial = if u2 > u1 { circle_segment_integral(u1, u2, rho) - c * (u2 - u1) } else { 0.0 };
    full + partial.max(0.0)
}

/// Area of the rectangle `[lo, hi)` inside the open disk `|x| < rho`.
fn rect_disk_area(lo: [f64; 2], hi: [f64; 2], rho: f64) -> f64 {
    let split = |l: f64, h: f64| -> [(f64, f64); 2] {
        // reflect the negative part onto the positive half-axis
        let neg = if l < 0.0 { (-(h.min(0.0)), -l) } else { (0.0, 0.0) };
        let pos = if h > 0.0 { (l.max(0.0), h) } else { (0.0, 0.0) };
        [neg, pos]
    };
    let xs = split(lo[0], hi[0]);
    let ys = split(lo[1], hi[1]);
    let mut area = 0.0;
    for &(a, b) in &xs {
        for &(c, d) in &ys {
            area += quadrant_rect_disk(a, b, c, d, rho);
        }
    }
    area
}

/// Measure of `Q_{v,m} ∩ C_k`.
pub fn cube_annulus_overlap(idx: &DyadicIndex, k: AnnulusIndex, dim: usize) -> Result<f64> {
    check_dim(dim)?;
    Ok(idx.cube(dim).annulus_overlap(k.0))
}

/// Lowest annulus kept for a box touching the origin whose highest annulus is
/// `k_top`: the terms of such a box decay like `2^{k (α + n/q)}`, so the range
/// stops where that factor drops below `tail_tol`.
pub fn tail_cutoff(k_top: i32, decay: f64, tail_tol: f64) -> Result<i32> {
    if !(decay > 0.0) {
        return Err(HerzError::Inadmissible(format!(
            "origin tail requires alpha + n/q > 0, got {decay}"
        )));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(HerzError::Window(format!("tail_tol must lie in (0, 1), got {tail_tol}")));
    }
    Ok(k_top + (tail_tol.log2() / decay).floor() as i32)
}

/// Annulus range `(k_lo, k_hi)` met by the support of `field`.
///
/// `decay` is `α + n/q` of the norm about to be evaluated; it only matters
/// when some cube of the support touches the origin.
pub fn support_annulus_range(field: &CoeffField, decay: f64, tail_tol: f64) -> Result<(i32, i32)> {
    let dim = field.dim();
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for (idx, _) in field.iter() {
        let (k_lo, k_hi) = idx.cube(dim).annulus_range();
        let k_lo = match k_lo {
            Some(k) => k,
            None => tail_cutoff(k_hi, decay, tail_tol)?,
        };
        lo = lo.min(k_lo);
        hi = hi.max(k_hi);
    }
    if lo > hi {
        return Err(HerzError::EmptySupport);
    }
    Ok((lo, hi))
}
