use serde::Serialize;

use super::case::{suggested_s2, validate_case, EmbeddingCase, RawCase};
use crate::params::Exponent;

/// A corollary instance of the embedding theorem, in dimension one.
#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    /// corollary family
    pub label: &'static str,
    /// regime within the family
    pub regime: &'static str,
    pub case: EmbeddingCase,
}

#[allow(clippy::too_many_arguments)]
fn case(alpha1: f64, p: f64, s: f64, s1: f64, beta: Exponent, alpha2: f64, r: f64, q: f64) -> EmbeddingCase {
    let mut raw = RawCase {
        dim: 1,
        alpha1,
        p: Exponent::Finite(p),
        s,
        s1,
        beta,
        alpha2,
        r: Exponent::Finite(r),
        q,
        s2: 0.0,
    };
    raw.s2 = suggested_s2(&raw);
    validate_case(raw)
}

/// Solves the balance for `s₁` instead, for families that fix `s₂`.
#[allow(clippy::too_many_arguments)]
fn case_fixed_s2(alpha1: f64, p: f64, s: f64, beta: Exponent, alpha2: f64, r: f64, q: f64, s2: f64) -> EmbeddingCase {
    let s1 = s2 - 1.0 / q - alpha2 + 1.0 / s + alpha1;
    let mut c = case(alpha1, p, s, s1, beta, alpha2, r, q);
    c.raw.s2 = s2;
    validate_case(c.raw)
}

const B2: Exponent = Exponent::Finite(2.0);

/// Parameter instances of every corollary of the embedding theorem: the
/// `α₁ = 0` and `α₂ = 0` specializations, the Herz/Triebel-Lizorkin lists,
/// the two Jawerth-Franke-type chains leg by leg and the power-weight case.
pub fn corollary_presets() -> Vec<Preset> {
    let mut out = Vec::new();
    let mut push = |label, regime, case| out.push(Preset { label, regime, case });

    // target F_{s,β}^{s₁}: α₁ = 0, p = s
    push("herz-to-tl-target", "q < s, alpha2 >= 0", case(0.0, 4.0, 4.0, 0.0, B2, 0.5, 2.0, 2.0));
    push("herz-to-tl-target", "s <= q, alpha2 + n/q > n/s", case(0.0, 2.0, 2.0, 0.0, B2, 0.5, 2.0, 4.0));
    push("herz-to-tl-target", "s <= q, alpha2 + n/q = n/s", case(0.0, 2.0, 2.0, 0.0, B2, 0.25, 2.0, 4.0));

    // source F_{q,θ}^{s₂}: α₂ = 0, r = q
    push("tl-to-herz-source", "q < s, alpha1 <= 0", case(-0.125, 2.0, 4.0, 0.0, B2, 0.0, 2.0, 2.0));
    push("tl-to-herz-source", "s <= q, n/q > alpha1 + n/s", case(-0.4, 4.0, 2.0, 0.0, B2, 0.0, 4.0, 4.0));
    push("tl-to-herz-source", "s <= q, n/q = alpha1 + n/s", case(-0.25, 4.0, 2.0, 0.0, B2, 0.0, 4.0, 4.0));

    // Herz space K̇^{α₂,r}_q = K̇^{α₂,r}_q F^0_2 into F_{s,β}^{s₁}
    push("herz-into-tl", "1 < q < s, 0 <= alpha2 < n - n/q", case_fixed_s2(0.0, 4.0, 4.0, B2, 0.25, 2.0, 2.0, 0.0));
    push("herz-into-tl", "1 < s <= q, n/s - n/q < alpha2 < n - n/q", case_fixed_s2(0.0, 2.0, 2.0, B2, 0.5, 2.0, 4.0, 0.0));
    push("herz-into-tl", "1 < s <= q, alpha2 = n/s - n/q, beta = 2", case_fixed_s2(0.0, 2.0, 2.0, B2, 0.25, 2.0, 4.0, 0.0));

    // F_{q,θ}^{s₂} into K̇^{α₁,p}_s = K̇^{α₁,p}_s F^0_2
    push("tl-into-herz", "max(q,1) < s, -n/s < alpha1 <= 0", case(-0.125, 4.0, 4.0, 0.0, B2, 0.0, 2.0, 2.0));
    push("tl-into-herz", "1 < s <= q, -n/s < alpha1 < n/q - n/s", case(-0.375, 4.0, 2.0, 0.0, B2, 0.0, 4.0, 4.0));
    push("tl-into-herz", "1 < s <= q, alpha1 = n/q - n/s, theta = 2", case(-0.25, 4.0, 2.0, 0.0, B2, 0.0, 4.0, 4.0));

    // F_{t,∞}^{s₃} → K̇^{0,s}_q F_∞^{s₂} → F_{s,β}^{s₁} with t = 1, q = 2, s = 4
    push("jawerth-franke-1", "leg 1: F_{t,inf} into K^{0,s}_q F_inf", case(0.0, 4.0, 2.0, 0.25, Exponent::Infinite, 0.0, 1.0, 1.0));
    push("jawerth-franke-1", "leg 2: K^{0,s}_q F_inf into F_{s,beta}", case(0.0, 4.0, 4.0, 0.0, B2, 0.0, 4.0, 2.0));

    // F_{q,∞}^{s₂} → K̇^{0,q}_s F_β^{s₁} → F_{s,β}^{s₁} with q = 2, s = 4
    push("jawerth-franke-2", "leg 1: F_{q,inf} into K^{0,q}_s F_beta", case(0.0, 2.0, 4.0, 0.0, B2, 0.0, 2.0, 2.0));
    push("jawerth-franke-2", "leg 2: K^{0,q}_s F_beta into F_{s,beta}", case(0.0, 4.0, 4.0, 0.0, B2, 0.0, 2.0, 4.0));

    // F_{q,∞}^{s₂}(w_{γ₂}) → F_{s,β}^{s₁}(w_{γ₁}): α₁ = γ₁/s, α₂ = γ₂/q with γ₁ = γ₂ = 1/2
    push("power-weights", "q < s, gamma2/q >= gamma1/s", case(0.5 / 4.0, 4.0, 4.0, 0.0, B2, 0.5 / 2.0, 2.0, 2.0));
    out
}
