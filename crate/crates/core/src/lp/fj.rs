use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::bump::plateau;
use super::fourier::FourierGrid;
use crate::container::{read_container, write_container};
use crate::error::{HerzError, Result};
use crate::grid::GridSpec;

/// Steepness of the plateau behind the system. The standard value 1 leaves
/// `|φ̂(3/5)| ≈ 0.15`; halving it lifts the band lower bound to about 0.36.
pub const FJ_STEEPNESS: f64 = 0.5;

/// Real radial system with `Φ̂ = Ψ̂ = sqrt(ρ)` and
/// `φ̂ = ψ̂ = sqrt(ρ(ξ) − ρ(2ξ))`, so that
/// `Φ̂(ξ)² + Σ_{j≥1} φ̂(2^{-j}ξ)² = 1` for every `ξ`.
#[derive(Debug, Clone)]
pub struct FJSystem {
    fourier: FourierGrid,
    steepness: f64,
    big: Vec<f64>,
    small: Vec<f64>,
    lower_bound: f64,
    calderon_residual: f64,
}

#[derive(Serialize, Deserialize)]
struct FjHeader {
    kind: String,
    dim: usize,
    #[serde(rename = "L")]
    level: u32,
    half_extent: f64,
    steepness: f64,
}

pub fn big_profile(r: f64, kappa: f64) -> f64 {
    plateau(r, kappa).sqrt()
}

pub fn small_profile(r: f64, kappa: f64) -> f64 {
    (plateau(r, kappa) - plateau(2.0 * r, kappa)).max(0.0).sqrt()
}

/// `Φ̂(ξ)² + Σ_j φ̂(2^{-j}ξ)²` at radius `r`, summing every nonzero term.
pub fn calderon_sum(r: f64, kappa: f64) -> f64 {
    let mut s = big_profile(r, kappa).powi(2);
    let mut t = r / 2.0;
    while t > 0.5 {
        s += small_profile(t, kappa).powi(2);
        t /= 2.0;
    }
    s
}

/// `min(inf_{|ξ| ≤ 5/3} Φ̂, inf_{3/5 ≤ |ξ| ≤ 5/3} φ̂)` by a fine radial scan.
pub fn band_lower_bound(kappa: f64) -> f64 {
    let steps = 20_000;
    let mut c = f64::INFINITY;
    for i in 0..=steps {
        let r = 5.0 / 3.0 * i as f64 / steps as f64;
        c = c.min(big_profile(r, kappa));
        let r2 = 0.6 + (5.0 / 3.0 - 0.6) * i as f64 / steps as f64;
        c = c.min(small_profile(r2, kappa));
    }
    c
}

pub fn build_fj_system(spec: &GridSpec) -> Result<FJSystem> {
    spec.validate()?;
    let fourier = FourierGrid::new(*spec);
    if fourier.nyquist() < 2.0 {
        return Err(HerzError::Resolution(format!(
            "grid Nyquist band {} does not contain |ξ| ≤ 2",
            fourier.nyquist()
        )));
    }
    let kappa = FJ_STEEPNESS;
    let big: Vec<f64> = fourier.radius().iter().map(|&r| big_profile(r, kappa)).collect();
    let small: Vec<f64> = fourier.radius().iter().map(|&r| small_profile(r, kappa)).collect();
    let mut residual = 0.0_f64;
    for &r in fourier.radius() {
        residual = residual.max((calderon_sum(r, kappa) - 1.0).abs());
    }
    if residual > 1e-12 {
        return Err(HerzError::Construction(format!("Calderón residual {residual:e} exceeds 1e-12")));
    }
    for (i, &r) in fourier.radius().iter().enumerate() {
        if (r >= 2.0 && big[i] != 0.0) || ((r <= 0.5 || r >= 2.0) && small[i] != 0.0) {
            return Err(HerzError::Construction(format!("profile support violated at |ξ| = {r}")));
        }
    }
    let lower_bound = band_lower_bound(kappa);
    if !(lower_bound > 0.0) {
        return Err(HerzError::Construction("profiles vanish on the required bands".into()));
    }
    Ok(FJSystem { fourier, steepness: kappa, big, small, lower_bound, calderon_residual: residual })
}

impl FJSystem {
    pub fn spec(&self) -> &GridSpec {
        self.fourier.spec()
    }

    pub fn fourier(&self) -> &FourierGrid {
        &self.fourier
    }

    pub fn steepness(&self) -> f64 {
        self.steepness
    }

    /// `Φ̂ = Ψ̂` on the frequency grid.
    pub fn big(&self) -> &[f64] {
        &self.big
    }

    /// `φ̂ = ψ̂` on the frequency grid.
    pub fn small(&self) -> &[f64] {
        &self.small
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn calderon_residual(&self) -> f64 {
        self.calderon_residual
    }

    /// The level-`v` analysis multiplier: `Φ̂` for `v = 0`, `φ̂(2^{-v}ξ)` above.
    pub fn level_multiplier(&self, v: u32) -> Vec<f64> {
        if v == 0 {
            return self.big.clone();
        }
        let scale = crate::dyadic::pow2(-(v as i32));
        self.fourier.radius().iter().map(|&r| small_profile(scale * r, self.steepness)).collect()
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let spec = self.spec();
        let header = FjHeader {
            kind: "fj-system".into(),
            dim: spec.dim,
            level: spec.level,
            half_extent: spec.half_extent,
            steepness: self.steepness,
        };
        let mut payload = self.big.clone();
        payload.extend_from_slice(&self.small);
        write_container(w, &header, &payload)
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let (h, payload) = read_container(r, |h: &FjHeader| Ok(2 * GridSpec::new(h.dim, h.level, h.half_extent)?.len()))?;
        if h.kind != "fj-system" {
            return Err(HerzError::Parse(format!("expected an fj-system container, got {:?}", h.kind)));
        }
        let sys = build_fj_system(&GridSpec::new(h.dim, h.level, h.half_extent)?)?;
        let n = sys.big.len();
        if payload[..n] != sys.big[..] || payload[n..] != sys.small[..] || h.steepness != sys.steepness {
            return Err(HerzError::Parse("stored profiles differ from the reconstructed system".into()));
        }
        Ok(sys)
    }
}
