use herzlab::grid::{herz_norm, GridFunction, GridSpec};
use herzlab::lp::*;
use herzlab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn window(k_max: i32, dim: usize) -> TruncationWindow {
    TruncationWindow::new(8, 1, -40, k_max, 1e-12, dim).unwrap()
}

fn gauss(x: f64, c: f64, w: f64) -> f64 {
    (-(x - c) * (x - c) / (2.0 * w * w)).exp()
}

/// Random sums of Gaussian bumps of width at least 1/2, effectively band-limited.
fn bump_family(rng: &mut ChaCha8Rng, count: usize) -> Vec<(f64, f64, f64)> {
    (0..count)
        .map(|_| (rng.random_range(-2.0..2.0), rng.random_range(0.5..1.5), rng.random_range(-1.0..1.0)))
        .collect()
}

fn eval_family(family: &[(f64, f64, f64)], x: f64) -> f64 {
    family.iter().map(|(c, w, a)| a * gauss(x, *c, *w)).sum()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn unweighted_herz_case_is_the_tl_norm() {
    let spec = GridSpec::new(1, 12, 16.0).unwrap();
    let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
    let f = GridFunction::sample(spec, |x| gauss(x[0], 0.4, 0.8) - 0.5 * gauss(x[0], -1.0, 0.6)).unwrap();
    let sp = SmoothParams::new(0.7, Exponent::Finite(1.5)).unwrap();
    for p in [1.0, 2.0, 3.5] {
        let hp = HerzParams::new(0.0, Exponent::Finite(p), p).unwrap();
        let a = ktl_norm(&f, &hp, &sp, &bank, &window(5, 1)).unwrap();
        let b = tl_norm(&f, p, &sp, &bank, &window(5, 1)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn band_limited_input_keeps_only_the_first_block() {
    // e^{-x²/800} has spectrum ∝ e^{-200ξ²}, far below rounding for |ξ| ≥ 1
    let spec = GridSpec::new(1, 11, 256.0).unwrap();
    let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
    assert!(bank.top() >= 2);
    let f = GridFunction::sample(spec, |x| gauss(x[0], 0.0, 20.0)).unwrap();
    let blocks = bank.blocks(f.samples());
    for b in &blocks[1..] {
        assert!(b.iter().all(|x| x.abs() < 1e-13));
    }
    let win = window(9, 1);
    let hp = HerzParams::new(0.3, Exponent::Finite(2.0), 1.5).unwrap();
    let plain = herz_norm(&f, &hp, &win).unwrap();
    for s in [-1.0, 0.0, 2.0] {
        let sp = SmoothParams::new(s, Exponent::Finite(2.0)).unwrap();
        let x = ktl_norm(&f, &hp, &sp, &bank, &win).unwrap();
        assert!((x - plain).abs() <= 1e-10 * plain, "s={s}: {x} vs {plain}");
    }
}

#[test]
fn plancherel_sanity() {
    let spec = GridSpec::new(1, 14, 8.0).unwrap();
    let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
    let f = GridFunction::sample(spec, |x| gauss(x[0], 0.0, 1.0)).unwrap();
    let sp = SmoothParams::new(0.0, Exponent::Finite(2.0)).unwrap();
    let got = tl_norm(&f, 2.0, &sp, &bank, &window(4, 1)).unwrap();
    let want = simpson(|x| gauss(x, 0.0, 1.0).powi(2), -8.0, 8.0, 1 << 16).sqrt();
    assert!((got - want).abs() <= 0.02 * want, "{got} vs {want}");
}

#[test]
fn filter_bank_is_a_partition_of_unity() {
    for (dim, level, r) in [(1, 12, 8.0), (2, 7, 4.0)] {
        let spec = GridSpec::new(dim, level, r).unwrap();
        let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
        assert!(bank.partition_residual() <= 1e-12);
        let fg = bank.fourier();
        for i in 0..spec.len() {
            let rad = fg.radius()[i];
            if rad <= 1.0 {
                assert_eq!(bank.multiplier(0)[i], 1.0);
                for j in 1..=bank.top() {
                    assert_eq!(bank.multiplier(j)[i], 0.0);
                }
            }
        }
    }
}

#[test]
fn local_means_track_the_filter_bank_norm() {
    let hp = HerzParams::new(0.2, Exponent::Finite(2.0), 2.0).unwrap();
    let sp = SmoothParams::new(0.5, Exponent::Finite(2.0)).unwrap();
    let kern = LocalMeanKernel::new(1).unwrap();
    let mut spreads = Vec::new();
    for level in [11, 12] {
        let spec = GridSpec::new(1, level, 16.0).unwrap();
        let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
        let win = window(5, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..50 {
            let fam = bump_family(&mut rng, 3);
            let f = GridFunction::sample(spec, |x| eval_family(&fam, x[0])).unwrap();
            let a = local_mean_norm(&f, &hp, &sp, &kern, &win).unwrap();
            let b = ktl_norm(&f, &hp, &sp, &bank, &win).unwrap();
            lo = lo.min(a / b);
            hi = hi.max(a / b);
        }
        println!("L={level}: local-mean/filter-bank ratio in [{lo:.4}, {hi:.4}]");
        assert!(lo > 0.0 && hi.is_finite());
        spreads.push((lo, hi));
    }
    let (a, b) = (spreads[0], spreads[1]);
    assert!((b.0 / a.0 - 1.0).abs() <= 0.1 && (b.1 / a.1 - 1.0).abs() <= 0.1, "{spreads:?}");
}

#[test]
fn local_mean_smoothness_limit() {
    let spec = GridSpec::new(1, 10, 8.0).unwrap();
    let f = GridFunction::sample(spec, |x| gauss(x[0], 0.0, 1.0)).unwrap();
    let hp = HerzParams::new(0.0, Exponent::Finite(2.0), 2.0).unwrap();
    let kern = LocalMeanKernel::new(1).unwrap();
    let sp = SmoothParams::new(kern.moment_order as f64 + 1.0, Exponent::Finite(2.0)).unwrap();
    assert!(matches!(local_mean_norm(&f, &hp, &sp, &kern, &window(4, 1)), Err(HerzError::Inadmissible(_))));
    let zero = GridFunction::zeros(spec).unwrap();
    let sp = SmoothParams::new(0.5, Exponent::Finite(2.0)).unwrap();
    assert_eq!(local_mean_norm(&zero, &hp, &sp, &kern, &window(4, 1)).unwrap(), 0.0);
}

#[test]
fn zero_weight_exponent_is_the_plain_norm() {
    let spec = GridSpec::new(1, 12, 16.0).unwrap();
    let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
    let f = GridFunction::sample(spec, |x| gauss(x[0], 0.3, 1.0)).unwrap();
    let rep = weighted_tl_norm(&f, 0.5, Exponent::Finite(2.0), 2.0, 0.0, &bank, &window(5, 1)).unwrap();
    let plain = tl_norm(&f, 2.0, &SmoothParams::new(0.5, Exponent::Finite(2.0)).unwrap(), &bank, &window(5, 1)).unwrap();
    assert_eq!(rep.delegated, plain);
    assert!((rep.direct - plain).abs() <= 1e-9 * plain);
}

#[test]
fn bump_in_unit_annulus_weight_factor() {
    // smooth bump on (1, 2); |x|^{1/2} lies in [1, √2] there
    let bump = |x: f64| if x > 1.0 && x < 2.0 { (-1.0 / ((x - 1.0) * (2.0 - x))).exp() } else { 0.0 };
    let spec = GridSpec::new(1, 13, 16.0).unwrap();
    let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
    let f = GridFunction::sample(spec, |x| bump(x[0])).unwrap();
    let sp = SmoothParams::new(0.0, Exponent::Finite(2.0)).unwrap();
    let rep = weighted_tl_norm(&f, 0.0, Exponent::Finite(2.0), 2.0, 1.0, &bank, &window(5, 1)).unwrap();
    let plain = tl_norm(&f, 2.0, &sp, &bank, &window(5, 1)).unwrap();
    let factor = rep.direct / plain;
    println!("weight factor {factor:.4}");
    assert!(factor >= 1.0 - 0.05 && factor <= 2f64.sqrt() * 1.05, "{factor}");
}

#[test]
fn weighted_equivalence_battery() {
    let spec = GridSpec::new(1, 12, 16.0).unwrap();
    let bank = build_filter_bank(&spec, max_bank_level(&spec)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut c: f64 = 1.0;
    for _ in 0..30 {
        let fam = bump_family(&mut rng, 3);
        let f = GridFunction::sample(spec, |x| eval_family(&fam, x[0])).unwrap();
        for gamma in [-0.5, 0.5, 1.5] {
            let rep = weighted_tl_norm(&f, 0.5, Exponent::Finite(2.0), 2.0, gamma, &bank, &window(5, 1)).unwrap();
            assert!(rep.ratio.is_finite() && rep.ratio > 0.0);
            c = c.max(rep.ratio).max(1.0 / rep.ratio);
        }
    }
    println!("direct/delegated within [1/{c:.4}, {c:.4}]");
    assert!(c < 2.0);
    let f = GridFunction::sample(spec, |x| gauss(x[0], 0.0, 1.0)).unwrap();
    assert!(matches!(
        weighted_tl_norm(&f, 0.5, Exponent::Finite(2.0), 2.0, -1.0, &bank, &window(5, 1)),
        Err(HerzError::Inadmissible(_))
    ));
}

#[test]
fn coefficient_energy_is_refinement_stable() {
    let energy = |level: u32| {
        let spec = GridSpec::new(1, level, 16.0).unwrap();
        let sys = build_fj_system(&spec).unwrap();
        let f = GridFunction::sample(spec, |x| gauss(x[0], 0.2, 0.7)).unwrap();
        let field = phi_transform(&f, &sys, 5).unwrap();
        field.iter().map(|(_, x)| x * x).sum::<f64>()
    };
    let (a, b) = (energy(11), energy(12));
    assert!(a.is_finite() && a > 0.0);
    assert!((b / a - 1.0).abs() <= 0.01, "{a} vs {b}");
}

#[test]
fn band_limited_roundtrips() {
    let spec = GridSpec::new(1, 12, 16.0).unwrap();
    let sys = build_fj_system(&spec).unwrap();
    assert!(sys.calderon_residual() <= 1e-12);
    assert!(sys.lower_bound() >= 0.3);
    let top = max_transform_level(&spec).unwrap().min(5);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let fam = bump_family(&mut rng, 4);
        let f = GridFunction::sample(spec, |x| eval_family(&fam, x[0])).unwrap();
        let err = roundtrip_error(&f, &sys, top).unwrap();
        assert!(err <= 1e-6, "{err}");
    }
}
