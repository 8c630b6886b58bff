use super::bank::FilterBank;
use crate::dyadic::{pow2, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::grid::{herz_norm, GridFunction, BOUNDARY_TOL};
use crate::numeric::sorted_sum;
use crate::params::{Exponent, HerzParams, SmoothParams};

/// Pointwise `(Σ_j (2^{js} |b_j|)^β)^{1/β}`, or `max_j 2^{js}|b_j|` for `β = ∞`.
pub fn lbeta_combine(blocks: &[Vec<f64>], s: f64, beta: Exponent) -> Vec<f64> {
    let len = blocks.first().map_or(0, |b| b.len());
    let weights: Vec<f64> = (0..blocks.len()).map(|j| pow2(j as i32).powf(s)).collect();
    let mut terms = vec![0.0; blocks.len()];
    (0..len)
        .map(|i| {
            for (j, b) in blocks.iter().enumerate() {
                terms[j] = weights[j] * b[i].abs();
            }
            match beta {
                Exponent::Infinite => terms.iter().fold(0.0_f64, |m, x| m.max(*x)),
                Exponent::Finite(b) => {
                    let mut pw: Vec<f64> = terms.iter().map(|x| x.powf(b)).collect();
                    sorted_sum(&mut pw).powf(1.0 / b)
                }
            }
        })
        .collect()
}

pub(crate) fn check_finite_outer(hp: &HerzParams) -> Result<()> {
    if hp.p.is_infinite() {
        return Err(HerzError::Inadmissible("function-space norms need a finite p".into()));
    }
    Ok(())
}

/// `‖f | K̇^{α,p}_q F^s_β‖` from the filter-bank blocks.
pub fn ktl_norm(
    f: &GridFunction,
    hp: &HerzParams,
    sp: &SmoothParams,
    bank: &FilterBank,
    win: &TruncationWindow,
) -> Result<f64> {
    hp.check_admissible(f.dim())?;
    check_finite_outer(hp)?;
    if f.spec() != bank.spec() {
        return Err(HerzError::Data("grid and filter bank were built for different grids".into()));
    }
    f.check_boundary_decay(BOUNDARY_TOL)?;
    let g = lbeta_combine(&bank.blocks(f.samples()), sp.s, sp.beta);
    herz_norm(&GridFunction::new(*f.spec(), g)?, hp, win)
}

/// `‖f | F^s_{p,β}‖`, the `α = 0`, `q = p` member of the scale.
pub fn tl_norm(f: &GridFunction, p: f64, sp: &SmoothParams, bank: &FilterBank, win: &TruncationWindow) -> Result<f64> {
    let hp = HerzParams::new(0.0, Exponent::Finite(p), p)?;
    ktl_norm(f, &hp, sp, bank, win)
}
