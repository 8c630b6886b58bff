use serde::{Deserialize, Serialize};

use super::geometry::ceil_log2;
use super::{check_dim, DyadicIndex};
use crate::error::{HerzError, Result};

/// Finite box in index space standing in for the infinite sums.
///
/// `m_bound` is a spatial half-width measured in level-0 units: at level `v`
/// the admitted positions are `-m_bound·2^v ≤ m_i < m_bound·2^v`, so every
/// admitted cube lies in `[-m_bound, m_bound)^n` whatever its level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub v_max: u32,
    pub m_bound: i64,
    pub k_min: i32,
    pub k_max: i32,
    pub tail_tol: f64,
}

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Finest level a window may hold.
pub const MAX_LEVEL: u32 = 100;

impl TruncationWindow {
    pub fn new(v_max: u32, m_bound: i64, k_min: i32, k_max: i32, tail_tol: f64, dim: usize) -> Result<Self> {
        let w = TruncationWindow { v_max, m_bound, k_min, k_max, tail_tol };
        w.validate(dim)?;
        Ok(w)
    }

    /// The smallest window holding levels `0..=v_max` over `[-m_bound, m_bound)^n`:
    /// `k_max` is the first annulus whose outer radius reaches the box corner
    /// and `k_min = -v_max - 1`, the annulus of the finest cube touching the origin.
    pub fn for_levels(v_max: u32, m_bound: i64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if m_bound < 1 {
            return Err(HerzError::Window(format!("m_bound must be at least 1, got {m_bound}")));
        }
        let corner = m_bound as f64 * (dim as f64).sqrt();
        let k_max = ceil_log2(corner);
        Self::new(v_max, m_bound, -(v_max as i32) - 1, k_max, DEFAULT_TAIL_TOL, dim)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        check_dim(dim)?;
        if self.m_bound < 1 {
            return Err(HerzError::Window(format!("m_bound must be at least 1, got {}", self.m_bound)));
        }
        if self.k_min >= self.k_max {
            return Err(HerzError::Window(format!(
                "k_min = {} must be below k_max = {}",
                self.k_min, self.k_max
            )));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(HerzError::Window(format!("tail_tol must lie in (0, 1), got {}", self.tail_tol)));
        }
        if self.v_max > MAX_LEVEL || self.m_bound > (1 << 20) {
            return Err(HerzError::Window("window exceeds the supported index range".into()));
        }
        let corner = self.m_bound as f64 * (dim as f64).sqrt();
        if corner > super::pow2(self.k_max) {
            return Err(HerzError::Window(format!(
                "cubes reach radius {corner} beyond 2^k_max = {}",
                super::pow2(self.k_max)
            )));
        }
        Ok(())
    }

    /// Half-open position range `[lo, hi)` admitted at level `v`.
    pub fn position_range(&self, v: u32) -> (i64, i64) {
        // saturates past 2^63; such levels are only ever sparsely populated
        let span = ((self.m_bound as i128) << v.min(MAX_LEVEL)).min(i64::MAX as i128) as i64;
        (-span, span)
    }

    pub fn contains(&self, idx: &DyadicIndex, dim: usize) -> bool {
        if idx.v > self.v_max {
            return false;
        }
        let (lo, hi) = self.position_range(idx.v);
        idx.position(dim).iter().all(|&m| m >= lo && m < hi)
    }

    /// Number of lattice positions at level `v`.
    pub fn level_size(&self, v: u32, dim: usize) -> u64 {
        let (lo, hi) = self.position_range(v);
        hi.abs_diff(lo).saturating_pow(dim as u32)
    }
}
