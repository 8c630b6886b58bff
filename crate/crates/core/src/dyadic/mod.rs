//! Dyadic cubes, annuli and the sparse coefficient fields indexed by them.

mod field;
mod geometry;
mod index;
mod window;

pub use field::CoeffField;
pub use geometry::{cube_annulus_overlap, support_annulus_range, tail_cutoff, Cell};
pub use index::{AnnulusIndex, DyadicIndex};
pub use window::{TruncationWindow, DEFAULT_TAIL_TOL, MAX_LEVEL};

use crate::error::{HerzError, Result};

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(HerzError::Dimension(dim))
    }
}

/// `2^k` for integer `k`, exact over the whole normal range.
#[inline]
pub fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}
