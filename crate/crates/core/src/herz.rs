//! The outer Herz sum shared by the sequence and grid norms.

use std::collections::BTreeMap;

use crate::numeric::sorted_sum;
use crate::params::{Exponent, HerzParams};

/// Combines annulus masses `A_k = ∫_{C_k} |g|^q` into
/// `(Σ_k 2^{kαp} A_k^{p/q})^{1/p}`, or `sup_k 2^{kα} A_k^{1/q}` for `p = ∞`.
///
/// Terms are formed in the log domain so that large `|kα|` cannot overflow
/// before the final power.
pub fn herz_combine(hp: &HerzParams, mass: &BTreeMap<i32, f64>) -> f64 {
    let logs: Vec<f64> = mass
        .iter()
        .filter(|(_, a)| **a > 0.0)
        .map(|(k, a)| *k as f64 * hp.alpha + a.log2() / hp.q)
        .collect();
    if logs.is_empty() {
        return 0.0;
    }
    match hp.p {
        Exponent::Infinite => logs.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x)).exp2(),
        Exponent::Finite(p) => {
            // factor out the largest term
            let top = logs.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
            let mut terms: Vec<f64> = logs.iter().map(|l| ((l - top) * p).exp2()).collect();
            let sum = sorted_sum(&mut terms);
            top.exp2() * sum.powf(1.0 / p)
        }
    }
}

/// Adds `weight · overlap` into the per-annulus term lists of a box `cell`
/// on which `|g|^q` equals `weight`.
pub(crate) fn deposit(
    terms: &mut BTreeMap<i32, Vec<f64>>,
    cell: &crate::dyadic::Cell,
    weight: f64,
    decay: f64,
    tail_tol: f64,
) -> crate::error::Result<()> {
    let (k_lo, k_hi) = cell.annulus_range();
    let k_lo = match k_lo {
        Some(k) => k,
        None => crate::dyadic::tail_cutoff(k_hi, decay, tail_tol)?,
    };
    for k in k_lo..=k_hi {
        let ov = cell.annulus_overlap(k);
        if ov > 0.0 {
            terms.entry(k).or_default().push(weight * ov);
        }
    }
    Ok(())
}

/// Reduces per-annulus term lists to masses with sorted summation.
pub(crate) fn reduce_terms(terms: BTreeMap<i32, Vec<f64>>) -> BTreeMap<i32, f64> {
    terms.into_iter().map(|(k, mut v)| (k, sorted_sum(&mut v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_annulus() {
        let hp = HerzParams::new(1.0, Exponent::Finite(2.0), 3.0).unwrap();
        let mass = BTreeMap::from([(1, 1.0)]);
        assert!((herz_combine(&hp, &mass) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sup_and_sum() {
        let hp = HerzParams::new(0.0, Exponent::Finite(1.0), 1.0).unwrap();
        let mass = BTreeMap::from([(-1, 0.5), (0, 0.25)]);
        assert!((herz_combine(&hp, &mass) - 0.75).abs() < 1e-15);
        let hp = HerzParams::new(0.0, Exponent::Infinite, 1.0).unwrap();
        assert_eq!(herz_combine(&hp, &mass), 0.5);
        assert_eq!(herz_combine(&hp, &BTreeMap::new()), 0.0);
    }

    #[test]
    fn no_overflow_for_large_weights() {
        // 2^{kαp} = 2^{36000} overflows long before the final 1/p power
        let hp = HerzParams::new(20.0, Exponent::Finite(40.0), 1.0).unwrap();
        let mass = BTreeMap::from([(45, 1.0), (44, 1.0)]);
        let n = herz_combine(&hp, &mass);
        let expect = 900.0 + (1.0 + 2f64.powf(-800.0)).log2() / 40.0;
        assert!((n.log2() - expect).abs() < 1e-9);
    }
}
