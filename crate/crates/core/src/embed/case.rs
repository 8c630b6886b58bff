use serde::{Deserialize, Serialize};

use crate::dyadic::check_dim;
use crate::error::Result;
use crate::params::{Exponent, HerzParams, SmoothParams};

/// Tolerance for the balance identity and the boundary cases of the slack condition.
pub const BALANCE_TOL: f64 = 1e-12;

/// Unvalidated parameters of an embedding `K̇^{α₂,r}_q f^{s₂}_θ → K̇^{α₁,p}_s f^{s₁}_β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawCase {
    pub dim: usize,
    pub alpha1: f64,
    pub p: Exponent,
    pub s: f64,
    pub s1: f64,
    pub beta: Exponent,
    pub alpha2: f64,
    pub r: Exponent,
    pub q: f64,
    pub s2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaRule {
    EqualsBeta,
    Infinity,
}

/// One failed hypothesis of the embedding theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Failure {
    /// An exponent is not a positive number where one is required.
    Exponents { detail: String },
    /// `α₁ ≤ −n/s` or `α₂ ≤ −n/q`.
    AlphaRange { detail: String },
    /// `r > p`, or `p = ∞`.
    OuterExponents { r: Exponent, p: Exponent },
    /// `s₁ − n/s − α₁ ≠ s₂ − n/q − α₂`.
    Balance { residual: f64, suggested_s2: f64 },
    /// `q < s` but `α₂ < α₁`.
    CaseSplit { alpha1: f64, alpha2: f64 },
    /// `s ≤ q` but `α₂ + n/q < α₁ + n/s`.
    Slack { deficit: f64 },
}

impl Failure {
    pub fn reason(&self) -> &'static str {
        match self {
            Failure::Exponents { .. } => "exponents",
            Failure::AlphaRange { .. } => "alpha range",
            Failure::OuterExponents { .. } => "outer exponents",
            Failure::Balance { .. } => "balance",
            Failure::CaseSplit { .. } => "case split",
            Failure::Slack { .. } => "slack",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    Inadmissible { failures: Vec<Failure> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCase {
    pub raw: RawCase,
    pub verdict: Verdict,
    pub theta_rule: ThetaRule,
    pub theta: Exponent,
}

/// Classifies a parameter set against the hypotheses of the embedding theorem.
pub fn validate_case(raw: RawCase) -> EmbeddingCase {
    let n = raw.dim as f64;
    let mut failures = Vec::new();
    if check_dim(raw.dim).is_err() {
        failures.push(Failure::Exponents { detail: format!("dimension {} is not supported", raw.dim) });
    }
    for (name, x) in [("s", raw.s), ("q", raw.q)] {
        if !(x > 0.0 && x.is_finite()) {
            failures.push(Failure::Exponents { detail: format!("{name} must be positive and finite, got {x}") });
        }
    }
    for (name, x) in [("alpha1", raw.alpha1), ("alpha2", raw.alpha2), ("s1", raw.s1), ("s2", raw.s2)] {
        if !x.is_finite() {
            failures.push(Failure::Exponents { detail: format!("{name} must be finite, got {x}") });
        }
    }
    for (name, e) in [("p", raw.p), ("r", raw.r), ("beta", raw.beta)] {
        if let Exponent::Finite(x) = e {
            if !(x > 0.0) {
                failures.push(Failure::Exponents { detail: format!("{name} must be positive, got {x}") });
            }
        }
    }
    let theta_rule = theta_rule(&raw);
    let theta = match theta_rule {
        ThetaRule::EqualsBeta => raw.beta,
        ThetaRule::Infinity => Exponent::Infinite,
    };
    if !failures.is_empty() {
        return EmbeddingCase { raw, verdict: Verdict::Inadmissible { failures }, theta_rule, theta };
    }

    if raw.alpha1 <= -n / raw.s {
        failures.push(Failure::AlphaRange { detail: format!("alpha1 = {} must exceed -n/s = {}", raw.alpha1, -n / raw.s) });
    }
    if raw.alpha2 <= -n / raw.q {
        failures.push(Failure::AlphaRange { detail: format!("alpha2 = {} must exceed -n/q = {}", raw.alpha2, -n / raw.q) });
    }
    if raw.p.is_infinite() || raw.r.value() > raw.p.value() {
        failures.push(Failure::OuterExponents { r: raw.r, p: raw.p });
    }
    let residual = (raw.s1 - n / raw.s - raw.alpha1) - (raw.s2 - n / raw.q - raw.alpha2);
    if residual.abs() > BALANCE_TOL {
        failures.push(Failure::Balance { residual, suggested_s2: suggested_s2(&raw) });
    }
    if raw.q < raw.s {
        if raw.alpha2 < raw.alpha1 - BALANCE_TOL {
            failures.push(Failure::CaseSplit { alpha1: raw.alpha1, alpha2: raw.alpha2 });
        }
    } else {
        let deficit = (raw.alpha1 + n / raw.s) - (raw.alpha2 + n / raw.q);
        if deficit > BALANCE_TOL {
            failures.push(Failure::Slack { deficit });
        }
    }
    let verdict = if failures.is_empty() { Verdict::Admissible } else { Verdict::Inadmissible { failures } };
    EmbeddingCase { raw, verdict, theta_rule, theta }
}

/// `θ = β` exactly when `s ≤ q` and `α₂ + n/q = α₁ + n/s` (to [`BALANCE_TOL`]).
pub fn theta_rule(raw: &RawCase) -> ThetaRule {
    let n = raw.dim as f64;
    if raw.s <= raw.q && ((raw.alpha2 + n / raw.q) - (raw.alpha1 + n / raw.s)).abs() <= BALANCE_TOL {
        ThetaRule::EqualsBeta
    } else {
        ThetaRule::Infinity
    }
}

/// The `s₂` that satisfies the balance identity for the other parameters.
pub fn suggested_s2(raw: &RawCase) -> f64 {
    let n = raw.dim as f64;
    raw.s1 - n / raw.s - raw.alpha1 + n / raw.q + raw.alpha2
}

impl EmbeddingCase {
    pub fn is_admissible(&self) -> bool {
        matches!(self.verdict, Verdict::Admissible)
    }

    pub fn failures(&self) -> &[Failure] {
        match &self.verdict {
            Verdict::Admissible => &[],
            Verdict::Inadmissible { failures } => failures,
        }
    }

    pub fn dim(&self) -> usize {
        self.raw.dim
    }

    /// `(α₂, r, q)` and `(s₂, θ)`.
    pub fn source(&self) -> Result<(HerzParams, SmoothParams)> {
        let r = &self.raw;
        Ok((HerzParams::new(r.alpha2, r.r, r.q)?, SmoothParams::new(r.s2, self.theta)?))
    }

    /// `(α₁, p, s)` and `(s₁, β)`.
    pub fn target(&self) -> Result<(HerzParams, SmoothParams)> {
        let r = &self.raw;
        Ok((HerzParams::new(r.alpha1, r.p, r.s)?, SmoothParams::new(r.s1, r.beta)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::too_many_arguments)]
    fn raw(q: f64, s: f64, a1: f64, a2: f64, s1: f64, s2: f64, r: f64, p: f64) -> RawCase {
        RawCase {
            dim: 1,
            alpha1: a1,
            p: Exponent::Finite(p),
            s,
            s1,
            beta: Exponent::Finite(2.0),
            alpha2: a2,
            r: Exponent::Finite(r),
            q,
            s2,
        }
    }

    #[test]
    fn sobolev_case() {
        let c = validate_case(raw(2.0, 4.0, 0.0, 0.5, 0.0, 0.75, 2.0, 2.0));
        assert!(c.is_admissible());
        assert_eq!(c.theta_rule, ThetaRule::Infinity);
        assert_eq!(c.theta, Exponent::Infinite);
    }

    #[test]
    fn identity_case() {
        let c = validate_case(raw(2.0, 2.0, 0.0, 0.0, 0.3, 0.3, 1.0, 2.0));
        assert!(c.is_admissible());
        assert_eq!(c.theta, Exponent::Finite(2.0));
    }

    #[test]
    fn failures_are_named() {
        let c = validate_case(raw(2.0, 2.0, 0.0, 0.0, 0.0, 0.0, 4.0, 2.0));
        assert_eq!(c.failures().iter().map(Failure::reason).collect::<Vec<_>>(), vec!["outer exponents"]);

        let c = validate_case(raw(2.0, 4.0, 0.0, 0.5, 0.0, 0.7, 2.0, 2.0));
        match &c.failures()[0] {
            Failure::Balance { suggested_s2, .. } => assert!((suggested_s2 - 0.75).abs() < 1e-15),
            f => panic!("unexpected {f:?}"),
        }
        let c = validate_case(raw(2.0, 4.0, 0.5, 0.25, 0.0, suggested_s2(&raw(2.0, 4.0, 0.5, 0.25, 0.0, 0.0, 1.0, 1.0)), 1.0, 1.0));
        assert_eq!(c.failures()[0].reason(), "case split");
        let c = validate_case(raw(2.0, 1.0, 0.0, 0.0, 0.0, suggested_s2(&raw(2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0)), 1.0, 1.0));
        assert_eq!(c.failures()[0].reason(), "slack");
        let c = validate_case(raw(2.0, 4.0, -0.3, 0.0, 0.0, 0.0, 1.0, 1.0));
        assert_eq!(c.failures()[0].reason(), "alpha range");
        let mut bad = raw(2.0, 4.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0);
        bad.q = f64::NAN;
        assert_eq!(validate_case(bad).failures()[0].reason(), "exponents");
        let mut inf_p = raw(2.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0);
        inf_p.p = Exponent::Infinite;
        assert_eq!(validate_case(inf_p).failures()[0].reason(), "outer exponents");
    }

    #[test]
    fn shift_invariance() {
        let a = raw(2.0, 4.0, 0.0, 0.5, 0.0, 0.75, 2.0, 2.0);
        let mut b = a;
        b.s1 += 3.0;
        b.s2 += 3.0;
        assert_eq!(validate_case(a).verdict, validate_case(b).verdict);
    }
}
