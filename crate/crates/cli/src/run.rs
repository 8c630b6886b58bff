use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use herzlab::embed::{
    corollary_presets, counterexample_row, embedding_ratio, norm_ratio, suggested_s2, validate_case, worst_ratio_search,
    EmbeddingCase, RawCase, SearchConfig,
};
use herzlab::grid::{herz_norm, GridFunction, GridSpec};
use herzlab::lp::{
    build_filter_bank, build_fj_system, local_mean_norm, max_bank_level, max_transform_level, phi_transform,
    roundtrip_error, weighted_tl_norm, LocalMeanKernel,
};
use herzlab::numeric::ols_slope;
use herzlab::seq::{hardy_sums, read_sequence, seq_norm};
use herzlab::{CoeffField, Exponent, HerzParams, SmoothParams, TruncationWindow};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::report::{Outcome, RunConfig, Table};

type Result<T> = std::result::Result<T, CliError>;

/// Runs a recorded configuration. With `effects` off nothing but the report
/// is produced, so a replay leaves data files untouched.
pub fn execute(cfg: &RunConfig, effects: bool) -> Result<Outcome> {
    match &cfg.command {
        Command::Norm(a) => norm(a),
        Command::Embed(EmbedCmd::Validate(a)) => validate(a),
        Command::Embed(EmbedCmd::Counterexample(a)) => counterexample(a),
        Command::Embed(EmbedCmd::Ratio(a)) => ratio(a),
        Command::Embed(EmbedCmd::Search(a)) => search(a, cfg.seed),
        Command::Embed(EmbedCmd::Presets) => presets(),
        Command::Transform(TransformCmd::Roundtrip(a)) => roundtrip(a),
        Command::Transform(TransformCmd::Decompose(a)) => decompose(a, effects),
        Command::Hardy(a) => hardy(a),
        Command::Sample(a) => sample(a, effects),
        Command::Replay(_) => Err(CliError::input("a replay cannot be recorded in a report")),
    }
}

fn number(flag: &str, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| CliError::input(format!("--{flag}: not a number: {s:?}")))
}

fn exponent(flag: &str, s: &str) -> Result<Exponent> {
    Exponent::parse(s).map_err(|e| CliError::from(e).context(format!("--{flag}")))
}

fn required<'a>(flag: &str, s: &'a Option<String>) -> Result<&'a str> {
    s.as_deref().ok_or_else(|| CliError::input(format!("--{flag} is required here")))
}

fn finite(what: &str, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(CliError::internal(format!("{what} evaluated to NaN")));
    }
    Ok(x)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_field(path: &Path) -> Result<CoeffField> {
    CoeffField::read_jsonl(open(path)?).map_err(|e| CliError::from(e).context(path.display()))
}

fn read_grid(path: &Path) -> Result<GridFunction> {
    GridFunction::read(open(path)?).map_err(|e| CliError::from(e).context(path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Applies the overrides to `for_levels(v_max, m_bound)` and validates the result.
fn window(w: &WindowArgs, v_max: u32, m_bound: i64, dim: usize) -> Result<TruncationWindow> {
    let mut win = TruncationWindow::for_levels(w.v_max.unwrap_or(v_max), w.m_bound.unwrap_or(m_bound), dim)?;
    if let Some(k) = w.k_min {
        win.k_min = k;
    }
    if let Some(k) = w.k_max {
        win.k_max = k;
    }
    if let Some(t) = &w.tail_tol {
        win.tail_tol = number("tail-tol", t)?;
    }
    win.validate(dim)?;
    Ok(win)
}

/// The smallest window holding every entry of the field.
fn field_window(w: &WindowArgs, field: &CoeffField) -> Result<TruncationWindow> {
    let dim = field.dim();
    let mut m_bound = 1i64;
    for (idx, _) in field.iter() {
        let scale = 1i64.checked_shl(idx.v).filter(|s| *s > 0).unwrap_or(i64::MAX);
        for &m in idx.position(dim) {
            let need = if m >= 0 { m.saturating_add(1) } else { m.saturating_neg() };
            m_bound = m_bound.max(need.saturating_add(scale - 1) / scale);
        }
    }
    window(w, field.max_level().unwrap_or(0), m_bound, dim)
}

fn grid_window(w: &WindowArgs, spec: &GridSpec) -> Result<TruncationWindow> {
    window(w, 0, spec.half_extent.ceil() as i64, spec.dim)
}

fn norm(a: &NormArgs) -> Result<Outcome> {
    let p = exponent("p", &a.p)?;
    let sp = SmoothParams::new(number("s", &a.s)?, exponent("beta", &a.beta)?)?;
    let herz = || -> Result<HerzParams> {
        let alpha = number("alpha", required("alpha", &a.alpha)?)?;
        let q = number("q", required("q", &a.q)?)?;
        Ok(HerzParams::new(alpha, p, q)?)
    };
    let (win, result) = match a.space {
        Space::Seq => {
            let field = read_field(&a.input)?;
            let hp = herz()?;
            let win = field_window(&a.window, &field)?;
            let x = finite("norm", seq_norm(&field, &hp, &sp, &win)?)?;
            (win, json!({ "space": "seq", "norm": x, "entries": field.len() }))
        }
        Space::Herz => {
            let f = read_grid(&a.input)?;
            let hp = herz()?;
            let win = grid_window(&a.window, f.spec())?;
            let x = finite("norm", herz_norm(&f, &hp, &win)?)?;
            (win, json!({ "space": "herz", "norm": x, "grid": f.spec() }))
        }
        Space::Ktl => {
            let f = read_grid(&a.input)?;
            let hp = herz()?;
            let win = grid_window(&a.window, f.spec())?;
            let bank = build_filter_bank(f.spec(), max_bank_level(f.spec()))?;
            let x = finite("norm", herzlab::lp::ktl_norm(&f, &hp, &sp, &bank, &win)?)?;
            (win, json!({ "space": "ktl", "norm": x, "grid": f.spec(), "bank_top": bank.top() }))
        }
        Space::LocalMean => {
            let f = read_grid(&a.input)?;
            let hp = herz()?;
            let win = grid_window(&a.window, f.spec())?;
            let kern = LocalMeanKernel::new(a.laplacian_power)?;
            let x = finite("norm", local_mean_norm(&f, &hp, &sp, &kern, &win)?)?;
            (win, json!({ "space": "local-mean", "norm": x, "grid": f.spec(), "kernel": kern }))
        }
        Space::Weighted => {
            let f = read_grid(&a.input)?;
            let gamma = number("gamma", required("gamma", &a.gamma)?)?;
            let Exponent::Finite(pv) = p else {
                return Err(CliError::params("--p: the weighted norm needs a finite exponent"));
            };
            let win = grid_window(&a.window, f.spec())?;
            let bank = build_filter_bank(f.spec(), max_bank_level(f.spec()))?;
            let rep = weighted_tl_norm(&f, sp.s, sp.beta, pv, gamma, &bank, &win)?;
            finite("norm", rep.ratio)?;
            (win, json!({ "space": "weighted", "delegated": rep.delegated, "direct": rep.direct, "ratio": rep.ratio }))
        }
    };
    Ok(Outcome { window: Some(win), ..Outcome::new("norm", result) })
}

/// The case and whether `s₂` was filled in from the balance identity.
fn resolve_case(c: &CaseArgs) -> Result<(EmbeddingCase, bool)> {
    if let Some(i) = c.preset {
        let all = corollary_presets();
        let n = all.len();
        let preset = all.into_iter().nth(i).ok_or_else(|| CliError::input(format!("no preset {i}; there are {n}")))?;
        return Ok((preset.case, false));
    }
    if let Some(path) = &c.case {
        let raw: RawCase = serde_json::from_reader(open(path)?)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        return Ok((validate_case(raw), false));
    }
    let flag = |name: &str, v: &Option<String>| -> Result<String> {
        v.clone()
            .ok_or_else(|| CliError::input(format!("--{name} is required unless --preset or --case is given")))
    };
    let mut raw = RawCase {
        dim: c.dim,
        alpha1: number("alpha1", &flag("alpha1", &c.alpha1)?)?,
        p: exponent("p", &flag("p", &c.p)?)?,
        s: number("s", &flag("s", &c.s)?)?,
        s1: number("s1", &flag("s1", &c.s1)?)?,
        beta: exponent("beta", &c.beta)?,
        alpha2: number("alpha2", &flag("alpha2", &c.alpha2)?)?,
        r: exponent("r", &flag("r", &c.r)?)?,
        q: number("q", &flag("q", &c.q)?)?,
        s2: 0.0,
    };
    let derived = c.s2.is_none();
    raw.s2 = match &c.s2 {
        Some(s) => number("s2", s)?,
        None => suggested_s2(&raw),
    };
    Ok((validate_case(raw), derived))
}

fn case_outcome(command: &'static str, case: EmbeddingCase, result: Value) -> Outcome {
    Outcome { case: Some(case), ..Outcome::new(command, result) }
}

fn validate(a: &CaseArgs) -> Result<Outcome> {
    let (case, derived) = resolve_case(a)?;
    let reasons: Vec<&str> = case.failures().iter().map(|f| f.reason()).collect();
    let result = json!({
        "verdict": if case.is_admissible() { "admissible" } else { "inadmissible" },
        "reasons": reasons,
        "theta": case.theta,
        "s2_from_balance": derived,
        "suggested_s2": suggested_s2(&case.raw),
    });
    Ok(case_outcome("embed validate", case, result))
}

fn counterexample(a: &CounterexampleArgs) -> Result<Outcome> {
    let (case, _) = resolve_case(&a.case)?;
    if a.n_list.is_empty() {
        return Err(CliError::input("--N-list is empty"));
    }
    let rows = a.n_list.iter().map(|&n| counterexample_row(n, &case)).collect::<herzlab::Result<Vec<_>>>()?;
    let mut distinct = a.n_list.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let slope = (distinct.len() >= 3).then(|| {
        let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
        ols_slope(&xs, &ys)
    });
    let table = Table {
        columns: vec!["N", "target_norm^p", "source_norm^r", "ratio"],
        rows: rows.iter().map(|r| vec![json!(r.n), json!(r.target_pow), json!(r.source_pow), json!(r.ratio)]).collect(),
    };
    let per_level: Vec<f64> = rows.iter().map(|r| r.target_pow / r.n as f64).collect();
    let result = json!({
        "rows": rows,
        "target_pow_per_N": per_level,
        "slope": slope,
        "expected_slope": 1.0 / case.raw.p.value() - 1.0 / case.raw.r.value(),
    });
    Ok(Outcome { table: Some(table), ..case_outcome("embed counterexample", case, result) })
}

fn ratio(a: &RatioArgs) -> Result<Outcome> {
    let (case, _) = resolve_case(&a.case)?;
    let field = read_field(&a.input)?;
    let win = field_window(&a.window, &field)?;
    let x = if a.force { norm_ratio(&field, &case, &win)? } else { embedding_ratio(&field, &case, &win)? };
    let result = json!({ "ratio": finite("ratio", x)?, "entries": field.len(), "forced": a.force });
    Ok(Outcome { window: Some(win), ..case_outcome("embed ratio", case, result) })
}

fn search(a: &SearchArgs, seed: u64) -> Result<Outcome> {
    let (case, _) = resolve_case(&a.case)?;
    if !case.is_admissible() && !a.force {
        let reasons: Vec<&str> = case.failures().iter().map(|f| f.reason()).collect();
        return Err(CliError::params(format!(
            "case is inadmissible ({}); pass --force to search it anyway",
            reasons.join(", ")
        )));
    }
    let win = window(&a.window, 6, 2, case.dim())?;
    let mut cfg =
        if a.counterexample_seeded { SearchConfig::counterexample_seeded(win, seed) } else { SearchConfig::new(win, seed) };
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(r) = a.restarts {
        cfg.restarts = r;
    }
    if let Some(s) = &a.perturb_scale {
        cfg.perturb_scale = number("perturb-scale", s)?;
    }
    cfg.validate(case.dim())?;
    log::info!("search: {} restarts of {} trials on levels 0..={}", cfg.restarts, cfg.trials, win.v_max);
    let res = worst_ratio_search(&case, &cfg)?;
    if res.trace.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::internal("search trace is not monotone"));
    }
    let dim = case.dim();
    let field: Vec<Value> =
        res.best_field.iter().map(|(i, x)| json!({ "v": i.v, "m": i.position(dim), "val": x })).collect();
    let mut result = json!({
        "best_ratio": finite("ratio", res.best_ratio)?,
        "best_restart": res.best_restart,
        "evaluations": res.trace.len(),
        "trials": cfg.trials,
        "restarts": cfg.restarts,
        "perturb_scale": cfg.perturb_scale,
        "best_field": field,
    });
    if a.full_trace {
        result["trace"] = json!(res.trace);
    }
    Ok(Outcome { window: Some(win), ..case_outcome("embed search", case, result) })
}

fn presets() -> Result<Outcome> {
    let all = corollary_presets();
    let mut rows = Vec::new();
    let list: Vec<Value> = all
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let r = &p.case.raw;
            rows.push(vec![
                json!(i),
                json!(p.label),
                json!(p.regime),
                json!(r.dim),
                json!(r.alpha1),
                json!(r.p),
                json!(r.s),
                json!(r.s1),
                json!(r.beta),
                json!(r.alpha2),
                json!(r.r),
                json!(r.q),
                json!(r.s2),
                json!(p.case.theta),
                json!(p.case.is_admissible()),
            ]);
            json!({ "index": i, "label": p.label, "regime": p.regime, "case": p.case })
        })
        .collect();
    let table = Table {
        columns: vec![
            "index", "label", "regime", "dim", "alpha1", "p", "s", "s1", "beta", "alpha2", "r", "q", "s2", "theta",
            "admissible",
        ],
        rows,
    };
    Ok(Outcome { table: Some(table), ..Outcome::new("embed presets", json!({ "presets": list })) })
}

fn transform_setup(a: &TransformArgs) -> Result<(GridFunction, herzlab::lp::FJSystem, u32)> {
    let f = read_grid(&a.input)?;
    let max = max_transform_level(f.spec())?;
    let top = a.top.unwrap_or(max);
    if top > max {
        return Err(CliError::params(format!("--top {top} exceeds the deepest level {max} this grid supports")));
    }
    let sys = build_fj_system(f.spec())?;
    Ok((f, sys, top))
}

fn roundtrip(a: &TransformArgs) -> Result<Outcome> {
    let (f, sys, top) = transform_setup(a)?;
    let err = finite("roundtrip error", roundtrip_error(&f, &sys, top)?)?;
    let result = json!({
        "relative_l2_error": err,
        "top": top,
        "calderon_residual": sys.calderon_residual(),
        "lower_bound": sys.lower_bound(),
        "grid": f.spec(),
    });
    Ok(Outcome::new("transform roundtrip", result))
}

fn decompose(a: &DecomposeArgs, effects: bool) -> Result<Outcome> {
    let (f, sys, top) = transform_setup(&a.transform)?;
    let field = phi_transform(&f, &sys, top)?;
    let energy: f64 = field.iter().map(|(_, x)| x * x).sum();
    if effects {
        let mut w = create(&a.coeffs)?;
        field.write_jsonl(&mut w)?;
        w.flush().map_err(|e| CliError::input(format!("{}: {e}", a.coeffs.display())))?;
    }
    let result = json!({
        "entries": field.len(),
        "top": top,
        "coefficient_energy": energy,
        "max_abs": field.max_abs(),
        "grid": f.spec(),
    });
    Ok(Outcome::new("transform decompose", result))
}

fn hardy(a: &HardyArgs) -> Result<Outcome> {
    let eps = read_sequence(open(&a.input)?).map_err(|e| CliError::from(e).context(a.input.display()))?;
    let rep = hardy_sums(&eps, number("a", &a.a)?, exponent("q", &a.q)?)?;
    finite("constant", rep.constant)?;
    Ok(Outcome::new("hardy", json!({ "length": eps.len(), "report": rep, "within_bound": rep.constant <= rep.bound })))
}

fn sample(a: &SampleArgs, effects: bool) -> Result<Outcome> {
    let spec = GridSpec::new(a.dim, a.level, number("half-extent", &a.half_extent)?)?;
    let f = match a.shape {
        Shape::Gaussian => {
            let c = number("center", &a.center)?;
            let w = number("width", &a.width)?;
            if !(w > 0.0) {
                return Err(CliError::params(format!("--width must be positive, got {w}")));
            }
            GridFunction::sample(spec, |x| (-x.iter().map(|t| (t - c) * (t - c)).sum::<f64>() / (2.0 * w * w)).exp())?
        }
        Shape::Indicator => {
            let (lo, hi) = (number("lo", &a.lo)?, number("hi", &a.hi)?);
            GridFunction::sample(spec, |x| if x.iter().all(|t| *t >= lo && *t < hi) { 1.0 } else { 0.0 })?
        }
    };
    if effects {
        let mut w = create(&a.grid)?;
        f.write(&mut w)?;
        w.flush().map_err(|e| CliError::input(format!("{}: {e}", a.grid.display())))?;
    }
    let result = json!({ "grid": spec, "points": spec.len(), "max_abs": f.max_abs(), "l2_norm": f.lq_norm(2.0) });
    Ok(Outcome::new("sample", result))
}
