use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::fj::FJSystem;
use super::fourier::Spectrum;
use crate::dyadic::{pow2, CoeffField, DyadicIndex};
use crate::error::{HerzError, Result};
use crate::grid::{GridFunction, GridSpec};

/// Deepest level whose lattice `2^{-v} ℤ^n` lies on the cell corners of
/// `spec`. Requires `R = 2^ρ`; the answer is `L − 1 − ρ`.
pub fn max_transform_level(spec: &GridSpec) -> Result<u32> {
    let rho = spec.half_extent.log2().round();
    if pow2(rho as i32) != spec.half_extent {
        return Err(HerzError::Resolution(format!(
            "half_extent {} must be a power of two for the φ-transform lattice",
            spec.half_extent
        )));
    }
    let top = spec.level as i64 - 1 - rho as i64;
    if top < 0 {
        return Err(HerzError::Resolution("grid too coarse for level-0 lattice".into()));
    }
    Ok(top as u32)
}

struct Lattice {
    /// lattice step in cells
    stride: usize,
    /// positions per axis
    count: i64,
    /// first position
    first: i64,
    /// cell index of position `first`
    origin: usize,
}

fn lattice(spec: &GridSpec, v: u32) -> Lattice {
    let n = spec.points_per_axis();
    let side = pow2(-(v as i32));
    let stride = (side / spec.spacing()).round() as usize;
    let span = (spec.half_extent / side).round() as i64;
    Lattice { stride, count: 2 * span, first: -span, origin: n / 2 - span as usize * stride }
}

fn check_system(f_spec: &GridSpec, sys: &FJSystem) -> Result<()> {
    if f_spec != sys.spec() {
        return Err(HerzError::Data("grid and system were built for different grids".into()));
    }
    Ok(())
}

/// `S_φ f`: `λ_{0,m} = ⟨f, Φ_m⟩`, `λ_{v,m} = ⟨f, φ_{v,m}⟩` for `v = 1..=V` at
/// every lattice point of the box, computed as
/// `λ_{v,m} = 2^{-vn/2} (f ∗ φ_v)(2^{-v} m)` with `φ̂_v = φ̂(2^{-v}·)`.
pub fn phi_transform(f: &GridFunction, sys: &FJSystem, top: u32) -> Result<CoeffField> {
    let spec = *f.spec();
    check_system(&spec, sys)?;
    let max = max_transform_level(&spec)?;
    if top > max {
        return Err(HerzError::Resolution(format!("V = {top} exceeds the deepest lattice level {max} of this grid")));
    }
    let dim = spec.dim;
    let fourier = sys.fourier();
    let h = spec.spacing();
    // values at cell corners: evaluate at x − h/2
    let phase = fourier.shift_phase([-0.5 * h, if dim == 2 { -0.5 * h } else { 0.0 }]);
    let spectrum: Spectrum = fourier.forward(f.samples()).iter().zip(&phase).map(|(a, b)| a * b).collect();
    let n = spec.points_per_axis();
    let levels: Vec<Vec<(DyadicIndex, f64)>> = (0..=top)
        .into_par_iter()
        .map(|v| {
            let corners = fourier.apply(&spectrum, &sys.level_multiplier(v));
            let lat = lattice(&spec, v);
            let norm = pow2(-((v as usize * dim) as i32)).sqrt();
            let mut out = Vec::new();
            let rows = if dim == 2 { lat.count } else { 1 };
            for b in 0..rows {
                for a in 0..lat.count {
                    let ia = lat.origin + a as usize * lat.stride;
                    let flat = if dim == 2 { (lat.origin + b as usize * lat.stride) * n + ia } else { ia };
                    let val = norm * corners[flat];
                    if val != 0.0 {
                        let m = [lat.first + a, if dim == 2 { lat.first + b } else { 0 }];
                        out.push((DyadicIndex { v, m }, val));
                    }
                }
            }
            out
        })
        .collect();
    CoeffField::from_entries(dim, levels.into_iter().flatten())
}

/// `T_ψ λ = Σ_m λ_{0,m} Ψ_m + Σ_{v≥1} Σ_m λ_{v,m} ψ_{v,m}` sampled at the cell centres.
pub fn inverse_phi_transform(field: &CoeffField, sys: &FJSystem) -> Result<GridFunction> {
    let spec = *sys.spec();
    let dim = spec.dim;
    if field.dim() != dim {
        return Err(HerzError::Data(format!("field dimension {} differs from grid dimension {dim}", field.dim())));
    }
    let max = max_transform_level(&spec)?;
    if let Some(v) = field.max_level() {
        if v > max {
            return Err(HerzError::Resolution(format!("field level {v} exceeds the deepest lattice level {max}")));
        }
    }
    let n = spec.points_per_axis();
    let h = spec.spacing();
    let fourier = sys.fourier();
    let cell = h.powi(dim as i32);
    let per_level: Vec<Result<Spectrum>> = field
        .levels()
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| {
            let lat = lattice(&spec, v);
            let norm = pow2(-((v as usize * dim) as i32)).sqrt() / cell;
            let mut spikes = vec![0.0; spec.len()];
            for (idx, val) in field.level(v) {
                let mut flat = 0;
                for a in (0..dim).rev() {
                    let off = idx.m[a] - lat.first;
                    if off < 0 || off >= lat.count {
                        return Err(HerzError::Resolution(format!(
                            "coefficient at (v = {v}, m = {:?}) lies outside the grid box",
                            idx.position(dim)
                        )));
                    }
                    flat = flat * n + lat.origin + off as usize * lat.stride;
                }
                spikes[flat] = norm * val;
            }
            let mult = sys.level_multiplier(v);
            Ok(fourier.forward(&spikes).iter().zip(&mult).map(|(z, m)| z * m).collect())
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); spec.len()];
    for part in per_level {
        for (t, z) in total.iter_mut().zip(part?) {
            *t += z;
        }
    }
    // corners → centres
    let phase = fourier.shift_phase([0.5 * h, if dim == 2 { 0.5 * h } else { 0.0 }]);
    for (t, p) in total.iter_mut().zip(&phase) {
        *t *= p;
    }
    GridFunction::new(spec, fourier.inverse_real(total))
}

/// `‖T_ψ S_φ f − f‖_2 / ‖f‖_2`, zero for `f = 0`.
pub fn roundtrip_error(f: &GridFunction, sys: &FJSystem, top: u32) -> Result<f64> {
    let coeffs = phi_transform(f, sys, top)?;
    let back = inverse_phi_transform(&coeffs, sys)?;
    let norm = f.lq_norm(2.0);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let diff: Vec<f64> = back.samples().iter().zip(f.samples()).map(|(a, b)| a - b).collect();
    Ok(GridFunction::new(*f.spec(), diff)?.lq_norm(2.0) / norm)
}
