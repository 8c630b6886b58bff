use std::collections::{BTreeMap, HashSet};

use crate::dyadic::{CoeffField, DyadicIndex, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::herz::{deposit, herz_combine, reduce_terms};
use crate::params::{Exponent, HerzParams, SmoothParams};

/// `‖λ | K̇^{α,p}_q f^s_β‖` over the window.
///
/// The pointwise function `g = (Σ_{v,m} 2^{vsβ}|λ_{v,m}|^β χ_{v,m})^{1/β}` is
/// piecewise constant on the leaves of the dyadic tree spanned by the
/// support, so each `‖g χ_k‖_q` is integrated exactly from leaf/annulus
/// overlaps.
pub fn seq_norm(field: &CoeffField, hp: &HerzParams, sp: &SmoothParams, win: &TruncationWindow) -> Result<f64> {
    let dim = field.dim();
    win.validate(dim)?;
    field.check_window(win)?;
    seq_norm_unchecked(field, hp, sp, win.tail_tol)
}

/// [`seq_norm`] without the window containment check, for fields such as
/// maximal sequences that are built on a window by construction.
pub fn seq_norm_unchecked(field: &CoeffField, hp: &HerzParams, sp: &SmoothParams, tail_tol: f64) -> Result<f64> {
    let dim = field.dim();
    hp.check_admissible(dim)?;
    if !sp.s.is_finite() {
        return Err(HerzError::Data(format!("smoothness s = {} is not finite", sp.s)));
    }
    if let Exponent::Finite(b) = sp.beta {
        if !(b > 0.0 && b.is_finite()) {
            return Err(HerzError::Data(format!("beta = {b} is not a positive exponent")));
        }
    }
    if field.is_empty() {
        return Ok(0.0);
    }
    let mut inner = HashSet::new();
    let mut roots = Vec::new();
    for (idx, _) in field.iter() {
        for level in 0..idx.v {
            inner.insert(idx.ancestor(level));
        }
        roots.push(idx.ancestor(0));
    }
    roots.sort();
    roots.dedup();

    // g is deposited relative to the largest 2^{vs}|λ|
    let log_scale = field
        .iter()
        .map(|(i, x)| i.v as f64 * sp.s + x.abs().log2())
        .fold(f64::NEG_INFINITY, f64::max);
    let walker = Walker { field, inner: &inner, sp, q: hp.q, decay: hp.decay(dim), tail_tol, log_scale };
    let mut terms = BTreeMap::new();
    for root in roots {
        walker.visit(root, PathSum::EMPTY, &mut terms)?;
    }
    Ok(herz_combine(hp, &reduce_terms(terms)) * log_scale.exp2())
}

struct Walker<'a> {
    field: &'a CoeffField,
    inner: &'a HashSet<DyadicIndex>,
    sp: &'a SmoothParams,
    q: f64,
    decay: f64,
    tail_tol: f64,
    log_scale: f64,
}

/// `Σ 2^{vsβ}|λ|^β` along a root-to-leaf path as `2^{top·β} · sum`, so that
/// no term under- or overflows for large `β`.
#[derive(Clone, Copy)]
struct PathSum {
    /// log₂ of the largest `2^{vs}|λ|` seen
    top: f64,
    sum: f64,
}

impl PathSum {
    const EMPTY: PathSum = PathSum { top: f64::NEG_INFINITY, sum: 0.0 };

    fn push(self, log_w: f64, beta: Exponent) -> PathSum {
        match beta {
            Exponent::Infinite => PathSum { top: self.top.max(log_w), sum: 1.0 },
            Exponent::Finite(b) if log_w > self.top => {
                PathSum { top: log_w, sum: self.sum * ((self.top - log_w) * b).exp2() + 1.0 }
            }
            Exponent::Finite(b) => PathSum { top: self.top, sum: self.sum + ((log_w - self.top) * b).exp2() },
        }
    }

    /// log₂ of `(Σ …)^{1/β}`
    fn log_norm(self, beta: Exponent) -> f64 {
        match beta {
            Exponent::Infinite => self.top,
            Exponent::Finite(b) => self.top + self.sum.log2() / b,
        }
    }
}

impl Walker<'_> {
    /// `acc` carries the path sum of the strict ancestors of `node`.
    fn visit(&self, node: DyadicIndex, acc: PathSum, terms: &mut BTreeMap<i32, Vec<f64>>) -> Result<()> {
        let dim = self.field.dim();
        let lam = self.field.get(&node).abs();
        let acc = if lam > 0.0 { acc.push(node.v as f64 * self.sp.s + lam.log2(), self.sp.beta) } else { acc };
        if self.inner.contains(&node) {
            for child in node.children(dim) {
                self.visit(child, acc, terms)?;
            }
            return Ok(());
        }
        if acc.sum == 0.0 {
            return Ok(());
        }
        let g = (acc.log_norm(self.sp.beta) - self.log_scale).exp2();
        deposit(terms, &node.cube(dim), g.powf(self.q), self.decay, self.tail_tol)
    }
}
