use serde::Serialize;

use super::bank::FilterBank;
use super::norms::{ktl_norm, lbeta_combine};
use crate::dyadic::TruncationWindow;
use crate::error::{HerzError, Result};
use crate::grid::GridFunction;
use crate::numeric::sorted_sum;
use crate::params::{Exponent, HerzParams, SmoothParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedReport {
    /// `‖f | K̇^{γ/p,p}_p F^s_β‖`
    pub delegated: f64,
    /// `‖(Σ_j 2^{jsβ}|φ_j ∗ f|^β)^{1/β}|x|^{γ/p} | L^p‖`
    pub direct: f64,
    pub ratio: f64,
}

/// `∫ |x|^γ` over a grid cell of side `h` with a corner at the origin.
pub fn origin_cell_weight(h: f64, gamma: f64, dim: usize) -> f64 {
    if dim == 1 {
        return h.powf(gamma + 1.0) / (gamma + 1.0);
    }
    // 2 ∫_0^{π/4} ∫_0^{h sec θ} r^{γ+1} dr dθ, Simpson in θ
    let steps = 2000;
    let d = std::f64::consts::FRAC_PI_4 / steps as f64;
    let mut acc = 0.0;
    for i in 0..=steps {
        let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * (i as f64 * d).cos().powf(-(gamma + 2.0));
    }
    2.0 * h.powf(gamma + 2.0) / (gamma + 2.0) * acc * d / 3.0
}

/// The power-weighted Triebel-Lizorkin norm with weight `|x|^γ`, both as the
/// Herz-type norm with `α = γ/p`, `q = p` and by direct weighted quadrature.
pub fn weighted_tl_norm(
    f: &GridFunction,
    s: f64,
    beta: Exponent,
    p: f64,
    gamma: f64,
    bank: &FilterBank,
    win: &TruncationWindow,
) -> Result<WeightedReport> {
    let spec = *f.spec();
    let dim = spec.dim;
    if !(gamma > -(dim as f64)) {
        return Err(HerzError::Inadmissible(format!("power weight exponent {gamma} must exceed -n = -{dim}")));
    }
    let hp = HerzParams::new(gamma / p, Exponent::Finite(p), p)?;
    let sp = SmoothParams::new(s, beta)?;
    let delegated = ktl_norm(f, &hp, &sp, bank, win)?;
    let g = lbeta_combine(&bank.blocks(f.samples()), s, beta);
    let h = spec.spacing();
    let vol = spec.cell_volume();
    let origin_w = origin_cell_weight(h, gamma, dim);
    let mut terms: Vec<f64> = g
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let w = if spec.cell(i).touches_origin() {
                origin_w
            } else {
                let c = spec.center(i);
                (c[0] * c[0] + c[1] * c[1]).sqrt().powf(gamma) * vol
            };
            x.abs().powf(p) * w
        })
        .collect();
    let direct = sorted_sum(&mut terms).powf(1.0 / p);
    let ratio = if delegated == 0.0 { 1.0 } else { direct / delegated };
    Ok(WeightedReport { delegated, direct, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_weights() {
        assert!((origin_cell_weight(0.5, 0.0, 1) - 0.5).abs() < 1e-15);
        assert!((origin_cell_weight(0.5, 0.0, 2) - 0.25).abs() < 1e-12);
        // ∫_{[0,1]^2} (x² + y²) = 2/3
        assert!((origin_cell_weight(1.0, 2.0, 2) - 2.0 / 3.0).abs() < 1e-12);
        assert!((origin_cell_weight(2.0, 1.0, 1) - 2.0).abs() < 1e-15);
    }
}
