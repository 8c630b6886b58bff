//! Smooth radial plateau profiles.

/// Steepness of the filter-bank profile: the plain `exp(-1/t)` mollified step.
pub const STANDARD_STEEPNESS: f64 = 1.0;

/// `C^∞` function of the radius that equals 1 on `r ≤ 1`, 0 on `r ≥ 2`, and
/// in between is `1 / (1 + exp(-κ (1/t − 1/(1−t))))` with `t = r − 1`.
///
/// `κ = 1` gives the quotient `e^{-1/(1-t)} / (e^{-1/t} + e^{-1/(1-t)})`.
pub fn plateau(r: f64, kappa: f64) -> f64 {
    let t = r - 1.0;
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let u = kappa * (1.0 / t - 1.0 / (1.0 - t));
        1.0 / (1.0 + (-u).exp())
    }
}
