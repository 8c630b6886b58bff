use serde::{Deserialize, Serialize};

use super::geometry::Cell;
use super::pow2;

/// Names the dyadic cube `Q_{v,m} = Π [2^{-v} m_i, 2^{-v}(m_i + 1))`.
///
/// Positions are stored in a fixed two-slot array; in dimension one the
/// second slot is always zero. Ordering is lexicographic on `(v, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicIndex {
    pub v: u32,
    pub m: [i64; 2],
}

impl DyadicIndex {
    pub fn new1(v: u32, m: i64) -> Self {
        DyadicIndex { v, m: [m, 0] }
    }

    pub fn new2(v: u32, m: [i64; 2]) -> Self {
        DyadicIndex { v, m }
    }

    /// Builds an index from a position slice of length 1 or 2.
    pub fn from_slice(v: u32, m: &[i64]) -> Option<Self> {
        match m {
            [a] => Some(Self::new1(v, *a)),
            [a, b] => Some(Self::new2(v, [*a, *b])),
            _ => None,
        }
    }

    pub fn position(&self, dim: usize) -> &[i64] {
        &self.m[..dim]
    }

    pub fn side(&self) -> f64 {
        pow2(-(self.v as i32))
    }

    pub fn cube(&self, dim: usize) -> Cell {
        let h = self.side();
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..dim {
            lo[i] = self.m[i] as f64 * h;
            hi[i] = (self.m[i] + 1) as f64 * h;
        }
        Cell { dim, lo, hi }
    }

    /// The unique cube at level `level ≤ v` containing this one.
    pub fn ancestor(&self, level: u32) -> Self {
        debug_assert!(level <= self.v);
        let shift = self.v - level;
        DyadicIndex { v: level, m: [floor_shift(self.m[0], shift), floor_shift(self.m[1], shift)] }
    }

    pub fn children(&self, dim: usize) -> impl Iterator<Item = DyadicIndex> + '_ {
        let count = 1usize << dim;
        (0..count).map(move |c| {
            let mut m = [2 * self.m[0], 2 * self.m[1]];
            m[0] += (c & 1) as i64;
            if dim == 2 {
                m[1] += ((c >> 1) & 1) as i64;
            }
            DyadicIndex { v: self.v + 1, m }
        })
    }
}

/// `⌊m / 2^shift⌋` for any shift.
fn floor_shift(m: i64, shift: u32) -> i64 {
    if shift >= 63 {
        if m < 0 {
            -1
        } else {
            0
        }
    } else {
        m >> shift
    }
}

/// Names the annulus `C_k = {x : 2^{k-1} ≤ |x| < 2^k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AnnulusIndex(pub i32);

impl AnnulusIndex {
    pub fn inner_radius(self) -> f64 {
        pow2(self.0 - 1)
    }

    pub fn outer_radius(self) -> f64 {
        pow2(self.0)
    }

    /// Lebesgue measure of `C_k` in dimension `dim`.
    pub fn measure(self, dim: usize) -> f64 {
        let (a, b) = (self.inner_radius(), self.outer_radius());
        match dim {
            1 => 2.0 * (b - a),
            _ => std::f64::consts::PI * (b * b - a * a),
        }
    }
}
