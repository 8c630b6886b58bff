use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::case::EmbeddingCase;
use crate::dyadic::{CoeffField, DyadicIndex, TruncationWindow};
use crate::error::{HerzError, Result};
use crate::seq::seq_norm;

/// Largest support used by the random restarts.
pub const MAX_SUPPORT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// hill-climbing steps per restart
    pub trials: usize,
    pub restarts: usize,
    /// standard deviation of a log-coefficient step
    pub perturb_scale: f64,
    pub seed: u64,
    pub window: TruncationWindow,
}

impl SearchConfig {
    pub fn new(window: TruncationWindow, seed: u64) -> Self {
        SearchConfig { trials: 400, restarts: 192, perturb_scale: 0.7, seed, window }
    }

    /// Restarts seeded only from `λ^N`, `N = 1..=v_max`: the growth witness
    /// for cases violating `r ≤ p`.
    pub fn counterexample_seeded(window: TruncationWindow, seed: u64) -> Self {
        SearchConfig { restarts: window.v_max.max(1) as usize, ..Self::new(window, seed) }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.trials < 1 || self.restarts < 1 {
            return Err(HerzError::Inadmissible("search needs at least one trial and one restart".into()));
        }
        if !(self.perturb_scale > 0.0 && self.perturb_scale.is_finite()) {
            return Err(HerzError::Inadmissible(format!("perturb_scale must be positive, got {}", self.perturb_scale)));
        }
        self.window.validate(dim)
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_field: CoeffField,
    pub best_ratio: f64,
    /// restart that produced the best field (lowest id among ties)
    pub best_restart: usize,
    /// running maximum after every evaluation, restarts concatenated in id order
    pub trace: Vec<f64>,
}

struct Evaluator<'a> {
    case: &'a EmbeddingCase,
    win: &'a TruncationWindow,
}

impl Evaluator<'_> {
    /// `(ratio, source norm)`; `None` when the field is degenerate.
    fn eval(&self, field: &CoeffField) -> Option<(f64, f64)> {
        let (shp, ssp) = self.case.source().ok()?;
        let (thp, tsp) = self.case.target().ok()?;
        let source = seq_norm(field, &shp, &ssp, self.win).ok()?;
        if !(source > 0.0 && source.is_finite()) {
            return None;
        }
        let target = seq_norm(field, &thp, &tsp, self.win).ok()?;
        let ratio = target / source;
        ratio.is_finite().then_some((ratio, source))
    }
}

fn to_field(dim: usize, support: &[DyadicIndex], logs: &[f64]) -> Option<CoeffField> {
    CoeffField::from_entries(dim, support.iter().zip(logs).map(|(i, l)| (*i, l.exp()))).ok()
}

fn random_position(rng: &mut ChaCha8Rng, win: &TruncationWindow, v: u32, dim: usize) -> [i64; 2] {
    let (lo, hi) = win.position_range(v);
    let mut m = [0; 2];
    for slot in m.iter_mut().take(dim) {
        *slot = rng.random_range(lo..hi);
    }
    m
}

/// Initial support and log-coefficients of restart `id`.
fn initial_state(id: usize, case: &EmbeddingCase, win: &TruncationWindow, rng: &mut ChaCha8Rng) -> (Vec<DyadicIndex>, Vec<f64>) {
    let dim = case.dim();
    let v_max = win.v_max;
    let raw = &case.raw;
    let rate = raw.s1 - dim as f64 / raw.s - raw.alpha1;
    let mut support: Vec<DyadicIndex> = Vec::new();
    if id < v_max as usize {
        // λ^N with N = id + 1: the known hard direction for the outer exponents
        for v in 1..=(id as u32 + 1) {
            let mut m = [0; 2];
            m[0] = 1;
            support.push(DyadicIndex { v, m });
        }
        let logs = support.iter().map(|i| -rate * i.v as f64 * std::f64::consts::LN_2).collect();
        return (support, logs);
    }
    match id % 4 {
        0 => {
            // nested chain through a random point
            let lo = rng.random_range(0..=v_max);
            let hi = rng.random_range(lo..=v_max);
            let top = random_position(rng, win, hi, dim);
            let leaf = DyadicIndex { v: hi, m: top };
            for v in lo..=hi {
                support.push(leaf.ancestor(v));
            }
        }
        1 => {
            // scattered cubes
            let k = rng.random_range(1..=MAX_SUPPORT);
            for _ in 0..k {
                let v = rng.random_range(0..=v_max);
                support.push(DyadicIndex { v, m: random_position(rng, win, v, dim) });
            }
        }
        2 => {
            // cubes next to the origin over a narrow band of levels
            let lo = rng.random_range(0..=v_max);
            let hi = (lo + rng.random_range(0..4)).min(v_max);
            for v in lo..=hi {
                for m0 in -2..2 {
                    if support.len() < MAX_SUPPORT && rng.random_bool(0.5) {
                        let mut m = [0; 2];
                        m[0] = m0;
                        for slot in m.iter_mut().take(dim).skip(1) {
                            *slot = rng.random_range(-2..2);
                        }
                        support.push(DyadicIndex { v, m });
                    }
                }
            }
            if support.is_empty() {
                support.push(DyadicIndex { v: lo, m: [0; 2] });
            }
        }
        _ => {
            // a run of neighbours at one level
            let v = rng.random_range(0..=v_max);
            let start = random_position(rng, win, v, dim);
            let (_, hi) = win.position_range(v);
            let k = rng.random_range(1..=MAX_SUPPORT) as i64;
            for j in 0..k {
                let mut m = start;
                m[0] = (start[0] + j).min(hi - 1);
                support.push(DyadicIndex { v, m });
            }
        }
    }
    support.sort();
    support.dedup();
    let logs = support
        .iter()
        .map(|i| -rate * i.v as f64 * std::f64::consts::LN_2 + rng.random_range(-3.0..3.0))
        .collect();
    (support, logs)
}

struct Restart {
    best: f64,
    field: Option<CoeffField>,
    trace: Vec<f64>,
}

fn run_restart(id: usize, case: &EmbeddingCase, cfg: &SearchConfig) -> Restart {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(id as u64);
    let ev = Evaluator { case, win: &cfg.window };
    let (support, mut logs) = initial_state(id, case, &cfg.window, &mut rng);
    let dim = case.dim();
    let mut trace = Vec::with_capacity(cfg.trials + 1);
    let mut current = to_field(dim, &support, &logs).and_then(|f| ev.eval(&f).map(|(r, s)| (r, s, f)));
    let mut best = match &current {
        Some((r, s, _)) => {
            let shift = s.ln();
            logs.iter_mut().for_each(|l| *l -= shift);
            *r
        }
        None => f64::NEG_INFINITY,
    };
    trace.push(best);
    for _ in 0..cfg.trials {
        if current.is_some() {
            let c = rng.random_range(0..logs.len());
            let step: f64 = StandardNormal.sample(&mut rng);
            let mut proposal = logs.clone();
            proposal[c] += cfg.perturb_scale * step;
            if let Some(f) = to_field(dim, &support, &proposal) {
                if let Some((r, s)) = ev.eval(&f) {
                    if r > best {
                        best = r;
                        // homogeneity: rescale so the source norm is 1
                        let shift = s.ln();
                        logs = proposal.iter().map(|l| l - shift).collect();
                        current = Some((r, 1.0, f));
                    }
                }
            }
        }
        trace.push(best);
    }
    let field = current.and_then(|_| to_field(dim, &support, &logs));
    Restart { best, field, trace }
}

/// Multi-start hill climbing on log-coefficients for the largest
/// target/source norm ratio inside the configured window.
pub fn worst_ratio_search(case: &EmbeddingCase, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate(case.dim())?;
    case.source()?;
    case.target()?;
    let restarts: Vec<Restart> = (0..cfg.restarts).into_par_iter().map(|id| run_restart(id, case, cfg)).collect();
    let mut trace = Vec::with_capacity(cfg.restarts * (cfg.trials + 1));
    let mut running = f64::NEG_INFINITY;
    let mut best_id = None;
    for (id, r) in restarts.iter().enumerate() {
        for t in &r.trace {
            running = running.max(*t);
            trace.push(running);
        }
        if r.field.is_some() && best_id.is_none_or(|b: usize| r.best > restarts[b].best) {
            best_id = Some(id);
        }
    }
    let best_id = best_id.ok_or_else(|| HerzError::Degenerate("no restart produced a nondegenerate field".into()))?;
    let best = &restarts[best_id];
    Ok(SearchResult {
        best_field: best.field.clone().expect("checked above"),
        best_ratio: best.best,
        best_restart: best_id,
        trace,
    })
}
