use super::case::EmbeddingCase;
use crate::dyadic::{CoeffField, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::seq::seq_norm;

/// `‖λ | target‖ / ‖λ | source‖` for an admissible case: the embedding
/// constant realized by `λ`.
pub fn embedding_ratio(field: &CoeffField, case: &EmbeddingCase, win: &TruncationWindow) -> Result<f64> {
    if !case.is_admissible() {
        let reasons: Vec<&str> = case.failures().iter().map(|f| f.reason()).collect();
        return Err(HerzError::Inadmissible(format!("embedding case fails: {}", reasons.join(", "))));
    }
    norm_ratio(field, case, win)
}

/// The same quotient without the admissibility gate, for contrast runs.
pub fn norm_ratio(field: &CoeffField, case: &EmbeddingCase, win: &TruncationWindow) -> Result<f64> {
    if field.dim() != case.dim() {
        return Err(HerzError::Data("field and case dimensions differ".into()));
    }
    let (shp, ssp) = case.source()?;
    let (thp, tsp) = case.target()?;
    let source = seq_norm(field, &shp, &ssp, win)?;
    if source == 0.0 {
        return Err(HerzError::Degenerate("source norm is zero".into()));
    }
    Ok(seq_norm(field, &thp, &tsp, win)? / source)
}
