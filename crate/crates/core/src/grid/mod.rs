//! Uniformly sampled functions on centred boxes and their Herz norms.

mod norm;

pub use norm::{coeff_field_from_grid, herz_norm};

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::container::{read_container, write_container};
use crate::dyadic::{check_dim, Cell};
use crate::error::{HerzError, Result};

/// Samples of a function on `[-R, R)^n` with `2^L` cells per axis.
///
/// Sample `i` sits at the centre of the cell `[-R + i h, -R + (i+1) h)`,
/// `h = 2R / 2^L`; two-dimensional data is row-major with the second
/// coordinate as the row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    #[serde(rename = "L")]
    pub level: u32,
    pub half_extent: f64,
}

impl GridSpec {
    pub fn new(dim: usize, level: u32, half_extent: f64) -> Result<Self> {
        let g = GridSpec { dim, level, half_extent };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        if !(self.half_extent > 0.0 && self.half_extent.is_finite()) {
            return Err(HerzError::Data(format!("half_extent must be positive, got {}", self.half_extent)));
        }
        if self.level == 0 || self.level as usize * self.dim > 28 {
            return Err(HerzError::Resolution(format!(
                "grid level {} out of range for dimension {}",
                self.level, self.dim
            )));
        }
        Ok(())
    }

    pub fn points_per_axis(&self) -> usize {
        1usize << self.level
    }

    pub fn len(&self) -> usize {
        self.points_per_axis().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.points_per_axis() as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Per-axis indices of flat sample `flat`.
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        let n = self.points_per_axis();
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat % n, flat / n]
        }
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_extent + (i as f64 + 0.5) * self.spacing()
    }

    pub fn center(&self, flat: usize) -> [f64; 2] {
        let ij = self.unflatten(flat);
        let mut x = [0.0; 2];
        for a in 0..self.dim {
            x[a] = self.coordinate(ij[a]);
        }
        x
    }

    pub fn cell(&self, flat: usize) -> Cell {
        let ij = self.unflatten(flat);
        let h = self.spacing();
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for a in 0..self.dim {
            lo[a] = -self.half_extent + ij[a] as f64 * h;
            hi[a] = lo[a] + h;
        }
        Cell { dim: self.dim, lo, hi }
    }

    /// Whether the sample lies in the outermost layer of cells.
    pub fn on_boundary(&self, flat: usize) -> bool {
        let ij = self.unflatten(flat);
        let last = self.points_per_axis() - 1;
        (0..self.dim).any(|a| ij[a] == 0 || ij[a] == last)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    samples: Vec<f64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, samples: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if samples.len() != spec.len() {
            return Err(HerzError::Data(format!(
                "expected {} samples, got {}",
                spec.len(),
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(HerzError::Data(format!("sample {i} is not finite")));
        }
        Ok(GridFunction { spec, samples })
    }

    pub fn zeros(spec: GridSpec) -> Result<Self> {
        Self::new(spec, vec![0.0; spec.len()])
    }

    /// Evaluates `f` at every cell centre.
    pub fn sample<F: Fn(&[f64]) -> f64 + Sync>(spec: GridSpec, f: F) -> Result<Self> {
        spec.validate()?;
        use rayon::prelude::*;
        let samples = (0..spec.len())
            .into_par_iter()
            .map(|i| {
                let x = spec.center(i);
                f(&x[..spec.dim])
            })
            .collect();
        Self::new(spec, samples)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.spec, self.samples.iter().map(|x| c * x).collect())
    }

    /// Requires the outermost cell layer to be below `rel · max|f|`; the
    /// Fourier-side operators treat the box as a torus.
    pub fn check_boundary_decay(&self, rel: f64) -> Result<()> {
        let boundary = (0..self.samples.len())
            .filter(|&i| self.spec.on_boundary(i))
            .fold(0.0_f64, |m, i| m.max(self.samples[i].abs()));
        let limit = rel * self.max_abs();
        if boundary > limit {
            return Err(HerzError::BoundaryMass { boundary, limit });
        }
        Ok(())
    }

    /// `(Σ |f_i|^q h^n)^{1/q}`.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let mut terms: Vec<f64> = self.samples.iter().map(|x| x.abs().powf(q)).collect();
        (crate::numeric::sorted_sum(&mut terms) * self.spec.cell_volume()).powf(1.0 / q)
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        write_container(w, &self.spec, &self.samples)
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let (spec, samples) = read_container(r, |s: &GridSpec| {
            s.validate().map_err(|e| HerzError::Parse(e.to_string()))?;
            Ok(s.len())
        })?;
        Self::new(spec, samples).map_err(|e| HerzError::Parse(e.to_string()))
    }
}

/// Boundary tolerance used by the Fourier-side norms.
pub const BOUNDARY_TOL: f64 = 1e-12;
