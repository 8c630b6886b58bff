//! Discrete Fourier multipliers on a [`GridSpec`].
//!
//! Frequencies are `ξ = 2π k / (N h)` with signed `k ∈ [-N/2, N/2)`; a
//! multiplier `m(ξ)` applied to the DFT of the samples realizes the
//! convolution `F^{-1}m ∗ f` under the convention `f̂(ξ) = ∫ f(x) e^{-ixξ} dx`.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;

pub type Spectrum = Vec<Complex64>;

#[derive(Clone)]
pub struct FourierGrid {
    spec: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `|ξ|` at every sample, in sample order.
    radius: Vec<f64>,
}

impl std::fmt::Debug for FourierGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierGrid").field("spec", &self.spec).finish()
    }
}

impl FourierGrid {
    pub fn new(spec: GridSpec) -> Self {
        let n = spec.points_per_axis();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let radius = (0..spec.len())
            .map(|flat| {
                let ij = spec.unflatten(flat);
                let mut r2 = 0.0;
                for &i in &ij[..spec.dim] {
                    let w = axis_frequency(i, n, spec.spacing());
                    r2 += w * w;
                }
                r2.sqrt()
            })
            .collect();
        FourierGrid { spec, forward, inverse, radius }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    /// Largest `|ξ|` representable along a single axis.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.spec.spacing()
    }

    pub fn frequency(&self, flat: usize) -> [f64; 2] {
        let ij = self.spec.unflatten(flat);
        let n = self.spec.points_per_axis();
        let mut w = [0.0; 2];
        for a in 0..self.spec.dim {
            w[a] = axis_frequency(ij[a], n, self.spec.spacing());
        }
        w
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.spec.points_per_axis();
        // rows
        data.par_chunks_mut(n).for_each(|row| plan.process(row));
        if self.spec.dim == 2 {
            let mut t = transpose(data, n);
            t.par_chunks_mut(n).for_each(|col| plan.process(col));
            data.copy_from_slice(&transpose(&t, n));
        }
    }

    pub fn forward(&self, samples: &[f64]) -> Spectrum {
        let mut data: Vec<Complex64> = samples.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse DFT, normalized, keeping the real part.
    pub fn inverse_real(&self, mut spectrum: Spectrum) -> Vec<f64> {
        self.transform(&mut spectrum, &self.inverse);
        let scale = 1.0 / self.spec.len() as f64;
        spectrum.iter().map(|z| z.re * scale).collect()
    }

    /// `F^{-1}[m(|ξ|) f̂]` for a radial multiplier sampled as `mult`.
    pub fn apply(&self, spectrum: &[Complex64], mult: &[f64]) -> Vec<f64> {
        let prod: Spectrum = spectrum.iter().zip(mult).map(|(z, m)| z * m).collect();
        self.inverse_real(prod)
    }

    /// Phase factor `e^{i ξ·t}` per sample; multiplying a spectrum by it
    /// evaluates the underlying function at `x + t`.
    pub fn shift_phase(&self, t: [f64; 2]) -> Vec<Complex64> {
        (0..self.spec.len())
            .map(|flat| {
                let w = self.frequency(flat);
                let arg = w[0] * t[0] + w[1] * t[1];
                Complex64::new(arg.cos(), arg.sin())
            })
            .collect()
    }
}

fn axis_frequency(i: usize, n: usize, h: f64) -> f64 {
    let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
    2.0 * std::f64::consts::PI * k / (n as f64 * h)
}

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for r in 0..n {
        for c in 0..n {
            out[c * n + r] = data[r * n + c];
        }
    }
    out
}
