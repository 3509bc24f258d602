use angelesco::curve::{CurveSolver, Geometry, Side};
use angelesco::szego::*;
use angelesco::weight::{log_weight_determination, WeightKind, WeightSpec};
use angelesco::{Complex, Error, PrecisionCtx, Real};

fn ctx() -> PrecisionCtx {
    PrecisionCtx::default()
}

fn lebesgue(ctx: PrecisionCtx) -> (WeightSpec, WeightSpec) {
    (WeightSpec::lebesgue(ctx.int(-1), ctx.ratio(-1, 3), ctx).unwrap(), WeightSpec::lebesgue(ctx.ratio(1, 3), ctx.one(), ctx).unwrap())
}

fn exp_weights(ctx: PrecisionCtx) -> (WeightSpec, WeightSpec) {
    let w1 = WeightSpec::new(WeightKind::ExpPoly, vec![ctx.czero(), ctx.cone()], ctx.int(-1), ctx.ratio(-1, 3), ctx);
    let w2 = WeightSpec::new(
        WeightKind::ExpPoly,
        vec![ctx.complex(0.2, 0.0), ctx.czero(), ctx.complex(-0.5, 0.0)],
        ctx.ratio(1, 3),
        ctx.one(),
        ctx,
    );
    (w1.unwrap(), w2.unwrap())
}

fn cache(c: f64, weights: (WeightSpec, WeightSpec)) -> SzegoCache {
    let ctx = ctx();
    let p = CurveSolver::new(Geometry::g0(ctx), ctx).solve(&ctx.real(c)).unwrap();
    SzegoCache::new(p, weights, ctx).unwrap()
}

/// Ten fixed probes spread over the plane away from the real axis.
fn probes(ctx: PrecisionCtx) -> Vec<Complex> {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..10).map(|_| ctx.complex(6.0 * next() - 3.0, (0.1 + 2.0 * next()) * if next() < 0.5 { -1.0 } else { 1.0 })).collect()
}

#[test]
fn branch_product_is_one() {
    let ctx = ctx();
    for weights in [lebesgue(ctx), exp_weights(ctx)] {
        let cache = cache(0.3, weights);
        for z in probes(ctx) {
            let prod = (0..3).map(|k| surface_szego(&cache, k, &z, Side::Off).unwrap()).fold(ctx.cone(), |a, s| a * s);
            assert!((prod - ctx.cone()).abs() < 1e-10);
        }
        let inf = szego_infinity(&cache);
        let prod = inf.s.iter().fold(ctx.cone(), |a, s| a * s);
        assert!((prod - ctx.cone()).abs() < 1e-10);
    }
}

#[test]
fn jump_relation_on_both_cuts() {
    let ctx = ctx();
    for c in [0.05, 0.5] {
        let cache = cache(c, exp_weights(ctx));
        for i in [1, 2] {
            let (a, b) = cache.params.support(i);
            for k in 1..=5 {
                let x = &a + &((&b - &a) * (k as f64 / 6.0));
                let z = Complex::from_real(x.clone());
                let f = jump_factor(&cache, i, &x).unwrap();
                for (s, t) in [(Side::Plus, Side::Minus), (Side::Minus, Side::Plus)] {
                    let lhs = surface_szego(&cache, i, &z, s).unwrap();
                    let rhs = surface_szego(&cache, 0, &z, t).unwrap() * &f;
                    let rel = ((&lhs - &rhs).abs() / rhs.abs()).to_f64();
                    assert!(rel <= 1e-8, "c = {c}, cut {i}, point {k}: {rel:e}");
                }
            }
        }
    }
}

#[test]
fn quarter_root_growth_at_hard_edge() {
    let ctx = ctx();
    let cache = cache(0.5, lebesgue(ctx));
    let scaled: Vec<f64> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&t| {
            let z = ctx.complex(1.0 + t, 0.0);
            surface_szego(&cache, 0, &z, Side::Off).unwrap().abs().to_f64() * t.powf(0.25)
        })
        .collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(hi / lo <= 2.0 && lo > 0.0, "{scaled:?}");
}

#[test]
fn classical_constant_at_infinity() {
    let ctx = ctx();
    // −½ log(πr) with r the half-length, from ∫₀^π log sin θ dθ = −π log 2;
    // the integral itself is checked here by a midpoint rule.
    let n = 200_000;
    let h = std::f64::consts::PI / n as f64;
    let log_sin: f64 = (0..n).map(|k| ((k as f64 + 0.5) * h).sin().ln() * h).sum();
    assert!((log_sin + std::f64::consts::PI * 2f64.ln()).abs() < 1e-4);
    let r = 1.0 / 3.0;
    let expected = -0.5 * (std::f64::consts::PI * r).ln();
    let w = WeightSpec::lebesgue(ctx.ratio(1, 3), ctx.one(), ctx).unwrap();
    let s = classical_szego_infinity(&w, ctx).unwrap().ln();
    assert!((s.re.to_f64() - expected).abs() < 1e-12);
    assert!((expected.abs() - 0.0230588).abs() < 1e-7);
    assert!(s.im.to_f64().abs() < 1e-30);
}

#[test]
fn classical_reflection_and_decay() {
    let ctx = ctx();
    let w = exp_weights(ctx).1;
    let z = ctx.complex(0.4, 0.3);
    let s = classical_szego(&w, &z, Side::Off, ctx).unwrap();
    let sc = classical_szego(&w, &z.conj(), Side::Off, ctx).unwrap();
    assert!((s.conj() - sc).abs() < 1e-30);
    let far = classical_szego(&w, &ctx.complex(1e15, 1e15), Side::Off, ctx).unwrap();
    let inf = classical_szego_infinity(&w, ctx).unwrap();
    assert!((far - inf).abs() < 1e-12);
}

#[test]
fn surface_reduces_to_classical_as_ratio_vanishes() {
    let ctx = ctx();
    let weights = lebesgue(ctx);
    let w2 = weights.1.clone();
    let cache = cache(1e-3, weights);
    let z = ctx.complex(2.0, 0.0);
    let surface = surface_szego(&cache, 0, &z, Side::Off).unwrap() / &cache.s_inf[0];
    let classical = classical_szego(&w2, &z, Side::Off, ctx).unwrap() / classical_szego_infinity(&w2, ctx).unwrap();
    assert!(((surface - classical).abs()).to_f64() < 1e-2);
}

#[test]
fn mirror_geometry_symmetries() {
    let ctx = ctx();
    let cache = cache(0.5, lebesgue(ctx));
    let inf = szego_infinity(&cache);
    assert!((&inf.s[1] - &inf.s[2]).abs() < 1e-40);
    assert!((&inf.s_n1 - &inf.s_n2).abs() < 1e-40);
    assert!((&inf.s_n1 - &(&inf.s[0] / &inf.s[1])).abs() < 1e-60);
    let z = ctx.complex(1.3, 0.6);
    for k in 0..3 {
        let up = surface_szego(&cache, k, &z, Side::Off).unwrap();
        let down = surface_szego(&cache, k, &z.conj(), Side::Off).unwrap();
        assert!((up.conj() - down).abs() < 1e-30);
    }
    let mirrored = surface_szego(&cache, 1, &ctx.complex(-1.3, 0.6), Side::Off).unwrap();
    let direct = surface_szego(&cache, 2, &ctx.complex(1.3, 0.6), Side::Off).unwrap();
    assert!((mirrored.conj() - direct).abs() < 1e-30);
}

#[test]
fn branch_points_and_bad_intervals_are_refused() {
    let ctx = ctx();
    let cache = cache(0.5, lebesgue(ctx));
    let near = ctx.complex(1.0 + 1e-9, 0.0);
    assert!(matches!(surface_szego(&cache, 0, &near, Side::Off), Err(Error::TooCloseToBranchPoint(_))));
    assert!(jump_factor(&cache, 1, &ctx.real(0.5)).is_err());
    let p = cache.params.clone();
    let short = WeightSpec::lebesgue(ctx.real(0.5), ctx.one(), ctx).unwrap();
    assert!(SzegoCache::new(p, (lebesgue(ctx).0, short), ctx).is_err());
}

#[test]
fn log_determinations() {
    let ctx = ctx();
    let two_pi = (2.0 * std::f64::consts::PI).ln();
    let leb = WeightSpec::lebesgue(ctx.int(-1), ctx.ratio(-1, 3), ctx).unwrap();
    let l = leb.log_rho(&ctx.real(-0.5));
    assert!((l.re.to_f64() - two_pi).abs() < 1e-15);
    assert!((l.im.to_f64() + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let e = &exp_weights(ctx).0;
    let l = e.log_rho(&ctx.real(-0.5));
    assert!((l.re.to_f64() - (-0.5 + two_pi)).abs() < 1e-15);
    let cw = WeightSpec::new(WeightKind::ComplexPoly, vec![ctx.complex(0.0, 2.0), ctx.cone()], ctx.int(-1), ctx.ratio(-1, 3), ctx).unwrap();
    let samples = log_weight_determination(&cw, 64, ctx).unwrap();
    let args: Vec<f64> = samples.values.iter().map(|v| v.im.to_f64()).collect();
    let variation = args.iter().cloned().fold(f64::MIN, f64::max) - args.iter().cloned().fold(f64::MAX, f64::min);
    assert!(variation < std::f64::consts::PI);
    for w in args.windows(2) {
        assert!((w[1] - w[0]).abs() < 0.1);
    }
    for (x, v) in samples.xs.iter().zip(&samples.values) {
        let direct = (Complex::from_real(x.clone()) + ctx.complex(0.0, 2.0)).abs().ln().to_f64() + two_pi;
        assert!((v.re.to_f64() - direct).abs() < 1e-14);
    }
    let vanishing = WeightSpec::new(WeightKind::ComplexPoly, vec![ctx.complex(0.5, 0.0), ctx.cone()], ctx.int(-1), ctx.ratio(-1, 3), ctx);
    assert!(vanishing.is_err());
}

#[test]
fn tolerance_scales_with_precision() {
    let t256 = szego_tol(PrecisionCtx::new(256).unwrap());
    let t128 = szego_tol(PrecisionCtx::new(128).unwrap());
    assert_eq!(t256, Real::pow2(-64, 256));
    assert!(t256 < t128);
}
