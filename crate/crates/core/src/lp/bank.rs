use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bump::{plateau, STANDARD_STEEPNESS};
use super::fourier::FourierGrid;
use crate::container::{read_container, write_container};
use crate::dyadic::pow2;
use crate::error::{HerzError, Result};
use crate::grid::GridSpec;

/// Littlewood-Paley resolution of unity `φ̂_0(ξ) = ρ(|ξ|)`,
/// `φ̂_j(ξ) = ρ(2^{-j}|ξ|) − ρ(2^{1-j}|ξ|)` for `j = 1..=J`, sampled on the
/// frequency grid of a [`GridSpec`].
#[derive(Debug, Clone)]
pub struct FilterBank {
    fourier: FourierGrid,
    top: u32,
    steepness: f64,
    multipliers: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct BankHeader {
    kind: String,
    dim: usize,
    #[serde(rename = "L")]
    level: u32,
    half_extent: f64,
    top: u32,
    steepness: f64,
}

/// Largest `J` with `2^{J+1}` inside the per-axis Nyquist band `π/h`.
pub fn max_bank_level(spec: &GridSpec) -> u32 {
    let nyquist = std::f64::consts::PI / spec.spacing();
    let mut j = 0;
    while pow2(j + 2) <= nyquist {
        j += 1;
    }
    j as u32
}

pub fn build_filter_bank(spec: &GridSpec, top: u32) -> Result<FilterBank> {
    spec.validate()?;
    if top < 1 {
        return Err(HerzError::Resolution("filter bank needs J ≥ 1".into()));
    }
    let max = max_bank_level(spec);
    if top > max {
        return Err(HerzError::Resolution(format!(
            "J = {top} needs |ξ| ≤ 2^{} inside the Nyquist band π/h = {}; at most J = {max} fits",
            top + 1,
            std::f64::consts::PI / spec.spacing()
        )));
    }
    let fourier = FourierGrid::new(*spec);
    let kappa = STANDARD_STEEPNESS;
    let multipliers: Vec<Vec<f64>> = (0..=top)
        .into_par_iter()
        .map(|j| {
            fourier
                .radius()
                .iter()
                .map(|&r| {
                    if j == 0 {
                        plateau(r, kappa)
                    } else {
                        plateau(pow2(-(j as i32)) * r, kappa) - plateau(pow2(1 - j as i32) * r, kappa)
                    }
                })
                .collect()
        })
        .collect();
    let bank = FilterBank { fourier, top, steepness: kappa, multipliers };
    let residual = bank.partition_residual();
    if residual > 1e-12 {
        return Err(HerzError::Construction(format!("partition of unity residual {residual:e}")));
    }
    Ok(bank)
}

impl FilterBank {
    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn spec(&self) -> &GridSpec {
        self.fourier.spec()
    }

    pub fn fourier(&self) -> &FourierGrid {
        &self.fourier
    }

    pub fn multiplier(&self, j: u32) -> &[f64] {
        &self.multipliers[j as usize]
    }

    /// `max |Σ_j φ̂_j(ξ) − 1|` over samples with `|ξ| ≤ 2^J`.
    pub fn partition_residual(&self) -> f64 {
        let limit = pow2(self.top as i32);
        let mut worst = 0.0_f64;
        for (i, &r) in self.fourier.radius().iter().enumerate() {
            if r <= limit {
                let s: f64 = self.multipliers.iter().map(|m| m[i]).sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        worst
    }

    /// Blocks `F^{-1}φ̂_j ∗ f` for `j = 0..=J`.
    pub fn blocks(&self, samples: &[f64]) -> Vec<Vec<f64>> {
        let spectrum = self.fourier.forward(samples);
        self.multipliers.par_iter().map(|m| self.fourier.apply(&spectrum, m)).collect()
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let spec = self.spec();
        let header = BankHeader {
            kind: "filter-bank".into(),
            dim: spec.dim,
            level: spec.level,
            half_extent: spec.half_extent,
            top: self.top,
            steepness: self.steepness,
        };
        let payload: Vec<f64> = self.multipliers.concat();
        write_container(w, &header, &payload)
    }

    /// Reads a serialized bank and checks it against a fresh construction.
    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let (h, payload) = read_container(r, |h: &BankHeader| {
            let spec = GridSpec::new(h.dim, h.level, h.half_extent)?;
            Ok(spec.len() * (h.top as usize + 1))
        })?;
        if h.kind != "filter-bank" {
            return Err(HerzError::Parse(format!("expected a filter-bank container, got {:?}", h.kind)));
        }
        let spec = GridSpec::new(h.dim, h.level, h.half_extent)?;
        let bank = build_filter_bank(&spec, h.top)?;
        if bank.multipliers.concat() != payload || h.steepness != bank.steepness {
            return Err(HerzError::Parse("stored multipliers differ from the reconstructed bank".into()));
        }
        Ok(bank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn low_band_is_level_zero_only() {
        let spec = GridSpec::new(1, 10, 16.0).unwrap();
        let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
        for (i, &r) in bank.fourier().radius().iter().enumerate() {
            if r <= 1.0 {
                assert_eq!(bank.multiplier(0)[i], 1.0);
                for j in 1..=bank.top() {
                    assert_eq!(bank.multiplier(j)[i], 0.0);
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_at_random_frequencies() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let top = 6;
        for _ in 0..10_000 {
            let r: f64 = rng.random_range(0.0..pow2(top));
            let mut s = plateau(r, STANDARD_STEEPNESS);
            for j in 1..=top {
                s += plateau(pow2(-j) * r, STANDARD_STEEPNESS) - plateau(pow2(1 - j) * r, STANDARD_STEEPNESS);
            }
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn annular_supports() {
        let spec = GridSpec::new(2, 7, 8.0).unwrap();
        let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
        assert!(bank.partition_residual() < 1e-12);
        for j in 1..=bank.top() {
            for (i, &r) in bank.fourier().radius().iter().enumerate() {
                if bank.multiplier(j)[i] != 0.0 {
                    assert!(r > pow2(j as i32 - 1) && r < pow2(j as i32 + 1));
                }
            }
        }
    }

    #[test]
    fn level_bounds_and_container() {
        let spec = GridSpec::new(1, 8, 4.0).unwrap();
        // h = 1/32, π/h ≈ 100.5 → 2^{J+1} ≤ 64 → J = 5
        assert_eq!(max_bank_level(&spec), 5);
        assert!(build_filter_bank(&spec, 6).is_err());
        assert!(build_filter_bank(&spec, 0).is_err());
        let bank = build_filter_bank(&spec, 5).unwrap();
        let mut buf = Vec::new();
        bank.write(&mut buf).unwrap();
        let back = FilterBank::read(buf.as_slice()).unwrap();
        assert_eq!(back.top(), 5);
    }
}
