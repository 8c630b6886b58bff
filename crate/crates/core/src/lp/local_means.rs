use serde::Serialize;

use super::bank::max_bank_level;
use super::fourier::FourierGrid;
use super::norms::{check_finite_outer, lbeta_combine};
use crate::dyadic::{pow2, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::grid::{herz_norm, GridFunction, BOUNDARY_TOL};
use crate::params::{HerzParams, SmoothParams};

/// Kernels `k_0 = g` and `k = Δ^h g` for the standard Gaussian `g`, with
/// `k̂_0(ξ) = e^{-|ξ|²/2}` and `k̂(ξ) = (−|ξ|²)^h e^{-|ξ|²/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalMeanKernel {
    pub laplacian_power: u32,
    /// Moments of `k` vanish up to this order, `2h − 1`.
    pub moment_order: u32,
    pub epsilon: f64,
    /// `min |k̂_0|` on `|ξ| < 2ε`.
    pub tauberian_k0: f64,
    /// `min |k̂|` on `ε/2 < |ξ| < 2ε`.
    pub tauberian_k: f64,
}

impl LocalMeanKernel {
    pub fn new(laplacian_power: u32) -> Result<Self> {
        if laplacian_power == 0 {
            return Err(HerzError::Inadmissible("the kernel needs at least one Laplacian".into()));
        }
        let epsilon = 1.0;
        let mut k0 = f64::INFINITY;
        let mut k = f64::INFINITY;
        let steps = 10_000;
        for i in 0..=steps {
            let r = 2.0 * epsilon * i as f64 / steps as f64;
            k0 = k0.min(Self::k0_hat(r));
            let r2 = epsilon / 2.0 + 1.5 * epsilon * i as f64 / steps as f64;
            k = k.min(Self::k_hat_for(laplacian_power, r2).abs());
        }
        Ok(LocalMeanKernel {
            laplacian_power,
            moment_order: 2 * laplacian_power - 1,
            epsilon,
            tauberian_k0: k0,
            tauberian_k: k,
        })
    }

    pub fn k0_hat(r: f64) -> f64 {
        (-0.5 * r * r).exp()
    }

    fn k_hat_for(h: u32, r: f64) -> f64 {
        (-(r * r)).powi(h as i32) * (-0.5 * r * r).exp()
    }

    pub fn k_hat(&self, r: f64) -> f64 {
        Self::k_hat_for(self.laplacian_power, r)
    }

    /// `∫ x^γ g^{(2a)}(x) dx` in one dimension by trapezoid quadrature on
    /// `[-40, 40]`, using `g^{(2a)} = He_{2a} g`.
    pub fn gaussian_derivative_moment(gamma: u32, a: u32) -> f64 {
        let steps = 16_000;
        let (lo, hi) = (-40.0_f64, 40.0_f64);
        let dx = (hi - lo) / steps as f64;
        let mut terms = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let x = lo + i as f64 * dx;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            let g = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
            terms.push(w * x.powi(gamma as i32) * hermite(2 * a, x) * g * dx);
        }
        // pairwise cancellation is large; plain Kahan-free ordering by |x| is enough here
        terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        terms.iter().sum()
    }

    /// Largest `|∫ x^γ k(x) dx|` over multi-indices `|γ| ≤ S`.
    pub fn max_moment(&self, dim: usize) -> f64 {
        let h = self.laplacian_power;
        let s = self.moment_order;
        let mut worst = 0.0_f64;
        if dim == 1 {
            for g in 0..=s {
                worst = worst.max(Self::gaussian_derivative_moment(g, h).abs());
            }
        } else {
            for g1 in 0..=s {
                for g2 in 0..=(s - g1) {
                    let mut total = 0.0;
                    for a in 0..=h {
                        total += binomial(h, a)
                            * Self::gaussian_derivative_moment(g1, a)
                            * Self::gaussian_derivative_moment(g2, h - a);
                    }
                    worst = worst.max(total.abs());
                }
            }
        }
        worst
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probabilists' Hermite polynomial `He_n`.
fn hermite(n: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = x * b - k as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// `‖(2^{js} k_j ∗ f)_j | K̇^{α,p}_q(ℓ_β)‖` for `j = 0..=J`, `J` the largest
/// filter-bank level of the grid.
pub fn local_mean_norm(
    f: &GridFunction,
    hp: &HerzParams,
    sp: &SmoothParams,
    kern: &LocalMeanKernel,
    win: &TruncationWindow,
) -> Result<f64> {
    let spec = *f.spec();
    hp.check_admissible(spec.dim)?;
    check_finite_outer(hp)?;
    let bound = kern.moment_order as f64 + 1.0;
    if !(sp.s < bound) {
        return Err(HerzError::Inadmissible(format!(
            "s = {} must stay below S + 1 = {bound} for Laplacian power {}",
            sp.s, kern.laplacian_power
        )));
    }
    f.check_boundary_decay(BOUNDARY_TOL)?;
    let top = max_bank_level(&spec);
    let fourier = FourierGrid::new(spec);
    let spectrum = fourier.forward(f.samples());
    use rayon::prelude::*;
    let blocks: Vec<Vec<f64>> = (0..=top)
        .into_par_iter()
        .map(|j| {
            let scale = pow2(-(j as i32));
            let mult: Vec<f64> = fourier
                .radius()
                .iter()
                .map(|&r| if j == 0 { LocalMeanKernel::k0_hat(r) } else { kern.k_hat(scale * r) })
                .collect();
            fourier.apply(&spectrum, &mult)
        })
        .collect();
    let g = lbeta_combine(&blocks, sp.s, sp.beta);
    herz_norm(&GridFunction::new(spec, g)?, hp, win)
}
