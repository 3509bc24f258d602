use angelesco::curve::*;
use angelesco::{Complex, Error, PrecisionCtx, Real};

fn ctx() -> PrecisionCtx {
    PrecisionCtx::default()
}

fn solver() -> CurveSolver {
    CurveSolver::new(Geometry::g0(ctx()), ctx())
}

/// φ for [a, b] at a real point left of a, in plain f64.
fn phi_left(a: f64, b: f64, x: f64) -> f64 {
    let w = -((x - a) * (x - b)).sqrt();
    (x - (a + b) / 2.0 + w) / 2.0
}

/// Real zeros of z′ in f64 by bisection on each interval between poles.
fn critical_points_f64(p: &CurveParams) -> Vec<f64> {
    let (a1, a2, b1, b2) = (p.a1.to_f64(), p.a2.to_f64(), p.b1.to_f64(), p.b2.to_f64());
    let dz = |x: f64| 1.0 - a1 / ((x - b1) * (x - b1)) - a2 / ((x - b2) * (x - b2));
    let bisect = |mut lo: f64, mut hi: f64| {
        let flo = dz(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (dz(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let tiny = 1e-300_f64.max(1e-12 * (b2 - b1));
    let argmax = {
        // z′ on (B1, B2) peaks once; locate it by golden-section search.
        let (mut lo, mut hi) = (b1 + tiny, b2 - tiny);
        for _ in 0..300 {
            let m1 = lo + (hi - lo) * 0.382;
            let m2 = lo + (hi - lo) * 0.618;
            if dz(m1) < dz(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        0.5 * (lo + hi)
    };
    vec![bisect(b1 - 100.0, b1 - tiny), bisect(b1 + tiny, argmax), bisect(argmax, b2 - tiny), bisect(b2 + tiny, b2 + 100.0)]
}

#[test]
fn phi_and_w_reference_values() {
    let ctx = ctx();
    let (a, b) = (ctx.ratio(1, 3), ctx.one());
    let z = ctx.complex(-1.0, 0.0);
    let phi = phi_map(&a, &b, &z).unwrap();
    assert!((phi.re.to_f64() - phi_left(1.0 / 3.0, 1.0, -1.0)).abs() < 1e-14);
    assert!((phi.re.to_f64() + 1.6498300).abs() < 1e-6);
    let w = w_map(&a, &b, &z, Side::Off);
    assert!((w.re.to_f64() + (8.0f64 / 3.0).sqrt()).abs() < 1e-14);
    let mid = Complex::from_real(ctx.ratio(2, 3));
    let wp = w_map(&a, &b, &mid, Side::Plus);
    let wm = w_map(&a, &b, &mid, Side::Minus);
    assert!((wp.im.to_f64() - 1.0 / 3.0).abs() < 1e-15 && wp.re.to_f64().abs() < 1e-15);
    assert_eq!(wp.conj(), wm);
    let at_b = phi_map(&a, &b, &Complex::from_real(b.clone())).unwrap();
    assert!((at_b.re.to_f64() - 1.0 / 6.0).abs() < 1e-15);
    let far = ctx.complex(1e12, 3e11);
    let ratio = phi_map(&a, &b, &far).unwrap() / far;
    assert!((ratio.re.to_f64() - 1.0).abs() < 1e-11 && ratio.im.to_f64().abs() < 1e-11);
}

#[test]
fn limit_data_at_zero() {
    let ctx = ctx();
    let lim = limit_params(&Geometry::g0(ctx), 0).unwrap();
    let phi = phi_left(1.0 / 3.0, 1.0, -1.0);
    assert!((lim.a2.to_f64() - 1.0 / 36.0).abs() < 1e-15);
    assert!((lim.b2.to_f64() - 2.0 / 3.0).abs() < 1e-15);
    assert!((lim.b1.to_f64() - (2.0 / 3.0 + phi)).abs() < 1e-14);
    assert!((lim.slope.to_f64() - (phi * phi - 1.0 / 36.0)).abs() < 1e-13);
    assert!((lim.slope.to_f64() - 2.6941610).abs() < 1e-7);
    assert!(lim.a1.is_zero());
}

#[test]
fn a1_vanishes_quadratically() {
    let ctx = ctx();
    let p = solver().solve(&ctx.real(1e-4)).unwrap();
    let phi = phi_left(1.0 / 3.0, 1.0, -1.0);
    let r1 = phi * phi - 1.0 / 36.0;
    let slope = p.a1.to_f64() / 1e-8;
    assert!((slope / r1 - 1.0).abs() < 1e-3, "{slope} vs {r1}");
}

#[test]
fn critical_values_hit_branch_points_on_grid() {
    let ctx = ctx();
    let s = solver();
    let bound = Real::from_f64(1e-30, ctx.bits);
    for k in 1..=20 {
        let c = ctx.ratio(k, 21);
        let p = s.solve(&c).unwrap();
        assert!(p.critical_value_residual() <= bound, "c = {k}/21");
        let crit = &p.crit;
        assert!(crit[0] < p.b1 && p.b1 < crit[1] && crit[1] < crit[2] && crit[2] < p.b2 && p.b2 < crit[3]);
        let reference = critical_points_f64(&p);
        for (x, r) in crit.iter().zip(&reference) {
            assert!((x.to_f64() - r).abs() < 1e-9 * (1.0 + r.abs()), "c = {k}/21: {} vs {r}", x.to_f64());
        }
    }
}

#[test]
fn critical_points_of_symmetric_params_pair_up() {
    let ctx = ctx();
    let p = solver().solve(&ctx.ratio(1, 2)).unwrap();
    let roots = critical_points(&p, ctx).unwrap();
    let tol = Real::from_f64(1e-60, ctx.bits);
    assert!((&roots[0].re + &roots[3].re).abs() < tol);
    assert!((&roots[1].re + &roots[2].re).abs() < tol);
    let values: Vec<f64> = roots.iter().map(|r| p.z_of(r).re.to_f64()).collect();
    let expected = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() < 1e-40);
    }
}

#[test]
fn perturbed_parameters_miss_branch_points() {
    let ctx = ctx();
    let mut p = solver().solve(&ctx.ratio(1, 2)).unwrap();
    p.a1 = &p.a1 * 1.1;
    let roots = critical_points(&p, ctx).unwrap();
    let miss = roots.iter().zip(p.branch_points().iter()).map(|(r, e)| (p.z_of(r).re - e).abs().to_f64()).fold(0.0, f64::max);
    assert!(miss > 1e-3);
}

#[test]
fn mirror_symmetry() {
    let ctx = ctx();
    let s = solver();
    let tol = Real::from_f64(1e-25, ctx.bits);
    for c in [0.05, 0.1, 0.3, 0.45] {
        let c = ctx.real(c);
        let p = s.solve(&c).unwrap();
        let q = s.solve(&(1.0 - &c)).unwrap();
        assert!((&p.a1 - &q.a2).abs() < tol);
        assert!((&p.b1 + &q.b2).abs() < tol);
        assert!((&p.beta_c1 + &q.alpha_c2).abs() < tol);
    }
    let half = s.solve(&ctx.ratio(1, 2)).unwrap();
    assert_eq!(half.regime, Regime::Balanced);
    assert!((&half.a1 - &half.a2).abs() < tol);
    assert!((&half.b1 + &half.b2).abs() < tol);
    assert!(half.chi_star.abs() < tol);
}

#[test]
fn thresholds_g0() {
    let ctx = ctx();
    let s = solver();
    let (c1, c2) = s.thresholds().unwrap();
    assert!((&c1 + &c2 - 1.0).abs() < Real::from_f64(1e-30, ctx.bits));
    assert!(c1 > 0.0 && c1 < 0.5);
    let at = s.solve(&c1).unwrap();
    assert!((&at.beta_c1 - &s.geometry.beta1).abs() < Real::from_f64(1e-30, ctx.bits));
    assert_eq!(find_thresholds(&s.geometry, ctx).unwrap().0, c1);
}

#[test]
fn soft_edge_increases_in_left_regime() {
    let ctx = ctx();
    let s = solver();
    let c_star = s.thresholds().unwrap().0.to_f64();
    let mut last = f64::NEG_INFINITY;
    for k in 1..=12 {
        let c = c_star * k as f64 / 13.0;
        let p = s.solve(&ctx.real(c)).unwrap();
        assert_eq!(p.regime, Regime::PushedLeft);
        let b = p.beta_c1.to_f64();
        assert!(b > last && b < -1.0 / 3.0);
        last = b;
    }
}

#[test]
fn continuous_across_thresholds() {
    let s = solver();
    let (c1, c2) = s.thresholds().unwrap();
    for t in [c1, c2] {
        let lo = s.solve(&(&t - 1e-4)).unwrap();
        let hi = s.solve(&(&t + 1e-4)).unwrap();
        assert_ne!(lo.regime, hi.regime);
        for (u, v) in [(&lo.a1, &hi.a1), (&lo.a2, &hi.a2), (&lo.b1, &hi.b1), (&lo.b2, &hi.b2)] {
            assert!((u - v).abs().to_f64() < 1e-2);
        }
    }
}

#[test]
fn special_point_by_regime() {
    let ctx = ctx();
    let s = solver();
    let c = ctx.real(0.05);
    let p = s.solve(&c).unwrap();
    let (_, z) = special_point(&p, &c);
    assert!((z - &p.beta_c1).abs() < Real::from_f64(1e-40, ctx.bits));
    let c = ctx.real(0.4);
    let p = s.solve(&c).unwrap();
    let (chi, z) = special_point(&p, &c);
    assert!(p.dz_of(&Complex::from_real(chi)).abs() > 1e-3);
    assert!(z > -1.0 / 3.0 && z < 1.0 / 3.0);
}

#[test]
fn sheet_roots_resubstitute() {
    let ctx = ctx();
    let p = solver().solve(&ctx.real(0.3)).unwrap();
    let tol = ctx.tol();
    for (re, im) in [(2.0, 0.0), (2.0, 1.0), (-3.0, 2.0), (0.0, 0.5), (-0.6, -0.01)] {
        let z = ctx.complex(re, im);
        let chis = sheet_values(&p, &z, Side::Off, ctx).unwrap();
        for chi in &chis {
            assert!((p.z_of(chi) - &z).abs() <= tol);
        }
    }
    let on_cut = Complex::from_real(ctx.real(0.7));
    let plus = sheet_values(&p, &on_cut, Side::Plus, ctx).unwrap();
    let minus = sheet_values(&p, &on_cut, Side::Minus, ctx).unwrap();
    assert!((&plus[0] - &minus[0].conj()).abs() < tol);
    assert!((&plus[0] - &minus[2]).abs() < tol, "sheets 0 and 2 swap across the second cut");
    assert!(matches!(sheet_values(&p, &on_cut, Side::Off, ctx), Err(Error::OnCut { .. })));
}

#[test]
fn sheet_zero_is_asymptotic_to_identity() {
    let ctx = ctx();
    let p = solver().solve(&ctx.real(0.3)).unwrap();
    let z = ctx.complex(1e8, 1e8);
    let chis = sheet_values(&p, &z, Side::Off, ctx).unwrap();
    assert!((&chis[0] - &z).abs() < 1e-6);
    assert!((&chis[1] - &p.b1).abs() < 1e-6);
    assert!((&chis[2] - &p.b2).abs() < 1e-6);
}

#[test]
fn pi_is_derivative_of_inverse() {
    let ctx = ctx();
    let p = solver().solve(&ctx.real(0.6)).unwrap();
    let z = ctx.complex(1.5, 0.7);
    let h = ctx.real(1e-20);
    let zp = &z + &Complex::from_real(h.clone());
    let zm = &z - &Complex::from_real(h.clone());
    let up = sheet_values(&p, &zp, Side::Off, ctx).unwrap();
    let dn = sheet_values(&p, &zm, Side::Off, ctx).unwrap();
    for k in 0..3 {
        let fd = (&up[k] - &dn[k]).scale(&(h.recip() * 0.5));
        let pi = pi_value(&p, k, &z, Side::Off, ctx).unwrap();
        assert!((fd - pi).abs() < 1e-30);
    }
}

#[test]
fn geometry_validation() {
    let ctx = ctx();
    assert!(Geometry::parse("-1", "0.5", "0.25", "1", ctx).is_err());
    assert!(Geometry::parse("0", "-1", "2", "3", ctx).is_err());
    let g = Geometry::parse("-2", "-1/2", "1/4", "1", ctx).unwrap();
    assert!(!g.is_symmetric(&ctx.tol()));
    let s = CurveSolver::new(g, ctx);
    let (c1, c2) = s.thresholds().unwrap();
    assert!(c1 < c2);
    for c in [0.05, 0.5, 0.95] {
        let p = s.solve(&ctx.real(c)).unwrap();
        assert!(p.critical_value_residual() <= ctx.tol());
    }
}
