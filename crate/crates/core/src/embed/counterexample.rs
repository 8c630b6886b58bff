use serde::Serialize;

use super::case::EmbeddingCase;
use crate::dyadic::{pow2, CoeffField, DyadicIndex, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::numeric::ols_slope;
use crate::params::Exponent;
use crate::seq::seq_norm;

/// The necessity family `λ^N` viewed under the source and the target parameters.
/// Both views hold the same coefficients.
#[derive(Debug, Clone)]
pub struct CounterexampleFields {
    pub source_view: CoeffField,
    pub target_view: CoeffField,
}

fn build(case: &EmbeddingCase, levels: std::ops::RangeInclusive<u32>) -> Result<CounterexampleFields> {
    if case.dim() != 1 {
        return Err(HerzError::Dimension(case.dim()));
    }
    let raw = &case.raw;
    let rate = raw.s1 - 1.0 / raw.s - raw.alpha1;
    let field = CoeffField::from_entries(1, levels.map(|v| (DyadicIndex::new1(v, 1), pow2(v as i32).powf(-rate))))?;
    Ok(CounterexampleFields { source_view: field.clone(), target_view: field })
}

/// `λ^N_{v,1} = 2^{-(s₁ − 1/s − α₁)v}` for `v = 1..=N`, zero elsewhere.
///
/// `Q_{v,1} = [2^{-v}, 2^{1-v})` fills the positive half of `C_{1-v}`, so
/// the levels `1..=N` occupy exactly the annuli `k = 1−N, …, 0` and each
/// contributes `2^{α₁p}` to the target norm to the power `p`.
pub fn counterexample_field(n_levels: u32, case: &EmbeddingCase) -> Result<CounterexampleFields> {
    if n_levels < 1 {
        return Err(HerzError::Data("the necessity family needs N ≥ 1".into()));
    }
    build(case, 1..=n_levels)
}

/// The same family restricted to levels `2..=N−2`, for `N ≥ 4`.
pub fn counterexample_field_trimmed(n_levels: u32, case: &EmbeddingCase) -> Result<CounterexampleFields> {
    if n_levels < 4 {
        return Err(HerzError::Data(format!("the trimmed family needs N ≥ 4, got {n_levels}")));
    }
    build(case, 2..=n_levels - 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NecessityRow {
    #[serde(rename = "N")]
    pub n: u32,
    /// target norm to the power `p` (the norm itself when `p = ∞`)
    pub target_pow: f64,
    /// source norm to the power `r` (the norm itself when `r = ∞`)
    pub source_pow: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessityReport {
    pub rows: Vec<NecessityRow>,
    pub slope: f64,
    pub expected_slope: f64,
}

fn pow_or_norm(x: f64, e: Exponent) -> f64 {
    match e {
        Exponent::Finite(p) => x.powf(p),
        Exponent::Infinite => x,
    }
}

/// Norms of `λ^N` on the smallest window that holds it.
pub fn counterexample_row(n_levels: u32, case: &EmbeddingCase) -> Result<NecessityRow> {
    let fields = counterexample_field(n_levels, case)?;
    let win = TruncationWindow::for_levels(n_levels, 1, 1)?;
    let (thp, tsp) = case.target()?;
    let (shp, ssp) = case.source()?;
    let target = seq_norm(&fields.target_view, &thp, &tsp, &win)?;
    let source = seq_norm(&fields.source_view, &shp, &ssp, &win)?;
    Ok(NecessityRow {
        n: n_levels,
        target_pow: pow_or_norm(target, case.raw.p),
        source_pow: pow_or_norm(source, case.raw.r),
        ratio: target / source,
    })
}

/// Log-log slope of the `λ^N` norm ratio against `N`; the expected value is `1/p − 1/r`.
pub fn necessity_slope(case: &EmbeddingCase, n_list: &[u32]) -> Result<NecessityReport> {
    let mut distinct = n_list.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(HerzError::Data(format!("need at least 3 distinct N values, got {}", distinct.len())));
    }
    let rows = n_list.iter().map(|&n| counterexample_row(n, case)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
    let slope = ols_slope(&xs, &ys);
    let expected_slope = 1.0 / case.raw.p.value() - 1.0 / case.raw.r.value();
    Ok(NecessityReport { rows, slope, expected_slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{validate_case, RawCase};

    fn case(p: f64, r: f64) -> EmbeddingCase {
        validate_case(RawCase {
            dim: 1,
            alpha1: 0.25,
            p: Exponent::Finite(p),
            s: 4.0,
            s1: 0.0,
            beta: Exponent::Finite(2.0),
            alpha2: 0.5,
            r: Exponent::Finite(r),
            q: 2.0,
            s2: 0.0 - 0.25 - 0.25 + 0.5 + 0.5,
        })
    }

    #[test]
    fn trimmed_n4_single_coefficient() {
        let c = case(2.0, 2.0);
        let f = counterexample_field_trimmed(4, &c).unwrap().target_view;
        assert_eq!(f.len(), 1);
        let expect = 2f64.powf(-2.0 * (0.0 - 0.25 - 0.25));
        assert_eq!(f.get(&DyadicIndex::new1(2, 1)), expect);
    }

    #[test]
    fn norms_are_linear_in_n() {
        let c = case(3.0, 1.5);
        for n in [4, 8, 16] {
            let row = counterexample_row(n, &c).unwrap();
            let target = n as f64 * 2f64.powf(0.25 * 3.0);
            let source = n as f64 * 2f64.powf(0.5 * 1.5);
            assert!((row.target_pow / target - 1.0).abs() < 1e-12);
            assert!((row.source_pow / source - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn slope_needs_three_values() {
        assert!(necessity_slope(&case(1.0, 1.0), &[4, 8, 8]).is_err());
        let rep = necessity_slope(&case(1.0, 2.0), &[4, 8, 16]).unwrap();
        assert!((rep.slope - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional_cases_rejected() {
        let mut c = case(1.0, 1.0);
        c.raw.dim = 2;
        assert!(matches!(counterexample_field(4, &c), Err(HerzError::Dimension(2))));
    }
}
