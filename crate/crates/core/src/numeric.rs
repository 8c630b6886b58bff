//! Small summation and regression helpers shared by the norm code.

/// Sums non-negative terms in descending order of magnitude.
pub fn sorted_sum(terms: &mut [f64]) -> f64 {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    terms.iter().sum()
}

/// `(Σ |x|^q)^{1/q}` for finite `q > 0`, the max for `q = ∞`.
pub fn lq_norm(xs: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return xs.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    }
    let mut terms: Vec<f64> = xs.iter().map(|x| x.abs().powf(q)).collect();
    sorted_sum(&mut terms).powf(1.0 / q)
}

/// Least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
