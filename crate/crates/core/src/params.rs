//! Parameter bundles for the quasi-norms.

use serde::{Deserialize, Serialize};

use crate::error::{HerzError, Result};

/// An exponent in `(0, ∞]`. Serialized as a JSON number, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(x) => s.serialize_f64(*x),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(x) => Exponent::from_f64(x),
            Raw::Str(s) => Exponent::parse(&s),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// The exponent as an `f64`, with `f64::INFINITY` for `∞`.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(x) => x,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// Accepts `inf`, `infinity` and `∞` besides ordinary decimals.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "inf" | "infinity" | "∞" | "Inf" => Ok(Exponent::Infinite),
            _ => {
                let x: f64 = t
                    .parse()
                    .map_err(|_| HerzError::Parse(format!("not an exponent: {s:?}")))?;
                Self::from_f64(x)
            }
        }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() || x <= 0.0 {
            return Err(HerzError::Inadmissible(format!("exponent must be positive, got {x}")));
        }
        Ok(if x.is_infinite() { Exponent::Infinite } else { Exponent::Finite(x) })
    }

    fn check(self, name: &str) -> Result<()> {
        match self {
            Exponent::Finite(x) if !(x > 0.0 && x.is_finite()) => Err(HerzError::Inadmissible(
                format!("{name} must be a positive exponent, got {x}"),
            )),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(x) => write!(f, "{x}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// Herz parameters `(α, p, q)`: weight exponent, outer `ℓ^p` exponent and inner `L^q` exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HerzParams {
    pub alpha: f64,
    pub p: Exponent,
    pub q: f64,
}

impl HerzParams {
    pub fn new(alpha: f64, p: Exponent, q: f64) -> Result<Self> {
        let hp = HerzParams { alpha, p, q };
        hp.check_shape()?;
        Ok(hp)
    }

    pub fn check_shape(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(HerzError::Inadmissible(format!("alpha must be finite, got {}", self.alpha)));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(HerzError::Inadmissible(format!(
                "q must be positive and finite, got {}",
                self.q
            )));
        }
        self.p.check("p")
    }

    /// `α + n/q`, the decay rate of an origin-touching cube's annulus terms.
    pub fn decay(&self, dim: usize) -> f64 {
        self.alpha + dim as f64 / self.q
    }

    /// Enforces `α > −n/q`.
    pub fn check_admissible(&self, dim: usize) -> Result<()> {
        self.check_shape()?;
        if self.decay(dim) <= 0.0 {
            return Err(HerzError::Inadmissible(format!(
                "alpha = {} must exceed -n/q = {}",
                self.alpha,
                -(dim as f64) / self.q
            )));
        }
        Ok(())
    }
}

/// Smoothness parameters `(s, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothParams {
    pub s: f64,
    pub beta: Exponent,
}

impl SmoothParams {
    pub fn new(s: f64, beta: Exponent) -> Result<Self> {
        if !s.is_finite() {
            return Err(HerzError::Inadmissible(format!("s must be finite, got {s}")));
        }
        beta.check("beta")?;
        Ok(SmoothParams { s, beta })
    }
}

/// Parameters `(r, d)` of the Peetre-type maximal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams {
    pub r: f64,
    pub d: f64,
}

impl StarParams {
    pub fn new(r: f64, d: f64, dim: usize) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(HerzError::Inadmissible(format!("r must be positive and finite, got {r}")));
        }
        if !(d > dim as f64) {
            return Err(HerzError::Inadmissible(format!("d = {d} must exceed n = {dim}")));
        }
        Ok(StarParams { r, d })
    }
}
