use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::TruncationWindow;
use crate::error::{HerzError, Result};
use crate::grid::{herz_norm, GridFunction, GridSpec};
use crate::params::HerzParams;

/// Radii `h/2, h, 2h, …` up to `2R`.
pub fn probe_radii(spec: &GridSpec) -> Vec<f64> {
    let h = spec.spacing();
    let mut radii = vec![0.5 * h];
    let mut r = h;
    while r <= 2.0 * spec.half_extent * (1.0 + 1e-12) {
        radii.push(r);
        r *= 2.0;
    }
    radii
}

/// Exact interval averages of the piecewise-constant `|f|` in dimension one.
struct Prefix1d {
    spec: GridSpec,
    /// `cum[i] = h Σ_{j<i} |f_j|`
    cum: Vec<f64>,
    abs: Vec<f64>,
}

impl Prefix1d {
    fn new(f: &GridFunction) -> Self {
        let h = f.spec().spacing();
        let abs: Vec<f64> = f.samples().iter().map(|x| x.abs()).collect();
        let mut cum = Vec::with_capacity(abs.len() + 1);
        cum.push(0.0);
        for a in &abs {
            cum.push(cum.last().unwrap() + a * h);
        }
        Prefix1d { spec: *f.spec(), cum, abs }
    }

    /// `∫_{-R}^{x} |f|`, zero outside the box on the left.
    fn primitive(&self, x: f64) -> f64 {
        let h = self.spec.spacing();
        let t = (x + self.spec.half_extent) / h;
        let n = self.abs.len();
        if t <= 0.0 {
            return 0.0;
        }
        if t >= n as f64 {
            return self.cum[n];
        }
        let i = t.floor() as usize;
        self.cum[i] + (t - i as f64) * h * self.abs[i]
    }

    fn average(&self, x: f64, r: f64) -> f64 {
        (self.primitive(x + r) - self.primitive(x - r)) / (2.0 * r)
    }
}

/// Averages over digital disks: the cells whose centres lie within `r` of the point.
struct Rows2d {
    spec: GridSpec,
    /// per-row prefix sums of `|f|`
    cum: Vec<Vec<f64>>,
}

impl Rows2d {
    fn new(f: &GridFunction) -> Self {
        let n = f.spec().points_per_axis();
        let cum = f
            .samples()
            .chunks(n)
            .map(|row| {
                let mut c = Vec::with_capacity(n + 1);
                c.push(0.0);
                for x in row {
                    c.push(c.last().unwrap() + x.abs());
                }
                c
            })
            .collect();
        Rows2d { spec: *f.spec(), cum }
    }

    fn average(&self, x: [f64; 2], r: f64) -> f64 {
        let h = self.spec.spacing();
        let n = self.spec.points_per_axis() as i64;
        let to_index = |c: f64| (c + self.spec.half_extent) / h - 0.5;
        let (cx, cy) = (to_index(x[0]), to_index(x[1]));
        let rr = r / h;
        let eps = 1e-9;
        let mut sum = 0.0;
        let mut count = 0.0;
        let j_lo = (cy - rr - eps).ceil() as i64;
        let j_hi = (cy + rr + eps).floor() as i64;
        for j in j_lo..=j_hi {
            let dy = j as f64 - cy;
            let half = (rr * rr - dy * dy).max(0.0).sqrt();
            let i_lo = (cx - half - eps).ceil() as i64;
            let i_hi = (cx + half + eps).floor() as i64;
            if i_hi < i_lo {
                continue;
            }
            count += (i_hi - i_lo + 1) as f64;
            if j < 0 || j >= n {
                continue;
            }
            let a = i_lo.clamp(0, n) as usize;
            let b = (i_hi + 1).clamp(0, n) as usize;
            if b > a {
                sum += self.cum[j as usize][b] - self.cum[j as usize][a];
            }
        }
        if count == 0.0 {
            0.0
        } else {
            sum / count
        }
    }
}

enum Averager {
    One(Prefix1d),
    Two(Rows2d),
}

impl Averager {
    fn new(f: &GridFunction) -> Self {
        if f.dim() == 1 {
            Averager::One(Prefix1d::new(f))
        } else {
            Averager::Two(Rows2d::new(f))
        }
    }

    fn average(&self, x: &[f64], r: f64) -> f64 {
        match self {
            Averager::One(p) => p.average(x[0], r),
            Averager::Two(p) => p.average([x[0], x[1]], r),
        }
    }
}

/// `max_r` of the centred averages of `|f|` at an arbitrary point `x`,
/// over the radii of [`probe_radii`]. Outside the box `f` is zero.
pub fn maximal_function_at(f: &GridFunction, x: &[f64]) -> f64 {
    let avg = Averager::new(f);
    probe_radii(f.spec()).iter().fold(0.0, |m, &r| m.max(avg.average(x, r)))
}

/// The discrete maximal function at every cell centre.
pub fn maximal_function(f: &GridFunction) -> Result<GridFunction> {
    let spec = *f.spec();
    let avg = Averager::new(f);
    let radii = probe_radii(&spec);
    let out = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let c = spec.center(i);
            radii.iter().fold(0.0_f64, |m, &r| m.max(avg.average(&c[..spec.dim], r)))
        })
        .collect();
    GridFunction::new(spec, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximalReport {
    /// `‖(Σ_j (M f_j)^β)^{1/β} | K̇^{α,p}_q‖`
    pub lhs: f64,
    /// `‖(Σ_j |f_j|^β)^{1/β} | K̇^{α,p}_q‖`
    pub rhs: f64,
    pub realized_constant: f64,
}

fn lbeta(fs: &[GridFunction], beta: f64) -> Result<GridFunction> {
    let spec = *fs[0].spec();
    let out = (0..spec.len())
        .map(|i| {
            let mut terms: Vec<f64> = fs.iter().map(|f| f.samples()[i].abs().powf(beta)).collect();
            crate::numeric::sorted_sum(&mut terms).powf(1.0 / beta)
        })
        .collect();
    GridFunction::new(spec, out)
}

/// Compares the vector-valued maximal function with the family itself in
/// `K̇^{α,p}_q(ℓ_β)`, under `1 < β < ∞`, `1 < q < ∞`, `−n/q < α < n(1 − 1/q)`.
pub fn maximal_probe(family: &[GridFunction], hp: &HerzParams, beta: f64, win: &TruncationWindow) -> Result<MaximalReport> {
    let first = family.first().ok_or_else(|| HerzError::Data("empty function family".into()))?;
    let spec = *first.spec();
    if family.iter().any(|f| *f.spec() != spec) {
        return Err(HerzError::Data("family members live on different grids".into()));
    }
    let n = spec.dim as f64;
    if !(beta > 1.0 && beta.is_finite()) {
        return Err(HerzError::Inadmissible(format!("beta = {beta} must lie in (1, ∞)")));
    }
    if !(hp.q > 1.0 && hp.q.is_finite()) {
        return Err(HerzError::Inadmissible(format!("q = {} must lie in (1, ∞)", hp.q)));
    }
    if !(hp.alpha > -n / hp.q && hp.alpha < n * (1.0 - 1.0 / hp.q)) {
        return Err(HerzError::Inadmissible(format!(
            "alpha = {} must lie in (-n/q, n(1 - 1/q)) = ({}, {})",
            hp.alpha,
            -n / hp.q,
            n * (1.0 - 1.0 / hp.q)
        )));
    }
    hp.check_shape()?;
    let maximal = family.iter().map(maximal_function).collect::<Result<Vec<_>>>()?;
    let lhs = herz_norm(&lbeta(&maximal, beta)?, hp, win)?;
    let rhs = herz_norm(&lbeta(family, beta)?, hp, win)?;
    if rhs == 0.0 {
        return Err(HerzError::Degenerate("the family vanishes".into()));
    }
    Ok(MaximalReport { lhs, rhs, realized_constant: lhs / rhs })
}
