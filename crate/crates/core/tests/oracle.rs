use angelesco::curve::Geometry;
use angelesco::io::lebesgue_weights;
use angelesco::kernel::Poly;
use angelesco::oracle::*;
use angelesco::surface::MultiIndex;
use angelesco::weight::{WeightKind, WeightSpec};
use angelesco::{Complex, PrecisionCtx, Real};
use rug::Rational;

fn ctx() -> PrecisionCtx {
    PrecisionCtx::default()
}

fn oracle() -> MopOracle {
    let ctx = ctx();
    MopOracle::new(lebesgue_weights(&Geometry::g0(ctx), ctx).unwrap(), ctx)
}

/// Exact Lebesgue moments ∫ x^k dx over [a, b].
fn exact_moments(a: &Rational, b: &Rational, k_max: usize) -> Vec<Rational> {
    let (mut pa, mut pb) = (a.clone(), b.clone());
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        out.push(Rational::from(&pb - &pa) / Rational::from(k + 1));
        pa *= a;
        pb *= b;
    }
    out
}

/// Exact monic type II coefficients by Gauss–Jordan elimination over Q.
fn exact_type2(n1: usize, n2: usize) -> Vec<Rational> {
    let size = n1 + n2;
    let m1 = exact_moments(&Rational::from(-1), &Rational::from((-1, 3)), 2 * size);
    let m2 = exact_moments(&Rational::from((1, 3)), &Rational::from(1), 2 * size);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (m, ni) in [(&m1, n1), (&m2, n2)] {
        for l in 0..ni {
            let mut row: Vec<Rational> = (0..size).map(|j| m[l + j].clone()).collect();
            row.push(-m[l + size].clone());
            rows.push(row);
        }
    }
    for col in 0..size {
        let piv = (col..size).find(|&r| rows[r][col] != 0).expect("normal index");
        rows.swap(col, piv);
        let p = rows[col][col].clone();
        for v in rows[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..size {
            if r != col && rows[r][col] != 0 {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (v, q) in rows[r].iter_mut().zip(pivot_row) {
                    *v -= Rational::from(&f * &q);
                }
            }
        }
    }
    let mut out: Vec<Rational> = rows.into_iter().map(|r| r[size].clone()).collect();
    out.push(Rational::from(1));
    out
}

fn to_real(q: &Rational, ctx: PrecisionCtx) -> Real {
    let num = Real::parse(&q.numer().to_string(), ctx.bits * 2).unwrap();
    let den = Real::parse(&q.denom().to_string(), ctx.bits * 2).unwrap();
    (num / den).with_prec(ctx.bits)
}

fn close(z: &Complex, q: &Rational, ctx: PrecisionCtx, tol: f64) -> bool {
    (z - &to_real(q, ctx)).abs() <= tol && z.im.abs() <= tol
}

#[test]
fn lebesgue_moments_are_exact() {
    let ctx = ctx();
    let w = WeightSpec::lebesgue(ctx.int(-1), ctx.ratio(-1, 3), ctx).unwrap();
    let m = compute_moments(&w, 1, 12, ctx).unwrap();
    let exact = exact_moments(&Rational::from(-1), &Rational::from((-1, 3)), 12);
    assert_eq!(exact[0], Rational::from((2, 3)));
    assert_eq!(exact[1], Rational::from((-4, 9)));
    assert_eq!(exact[2], Rational::from((26, 81)));
    for (k, q) in exact.iter().enumerate() {
        assert!(close(m.get(k), q, ctx, 1e-70), "m_{k}");
    }
}

#[test]
fn exp_weight_moments_match_composite_simpson() {
    let ctx = ctx();
    let w = WeightSpec::new(WeightKind::ExpPoly, vec![ctx.czero(), ctx.cone()], ctx.ratio(1, 3), ctx.one(), ctx).unwrap();
    let m = compute_moments(&w, 2, 6, ctx).unwrap();
    let n = 20_000;
    let (a, b) = (1.0 / 3.0, 1.0);
    let h = (b - a) / n as f64;
    for k in 0..=6 {
        let f = |x: f64| x.powi(k) * x.exp();
        let s: f64 = (0..=n)
            .map(|j| {
                let wgt = if j == 0 || j == n {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                wgt * f(a + j as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((m.get(k as usize).re.to_f64() - s).abs() < 1e-12, "k = {k}");
    }
}

#[test]
fn first_indices() {
    let ctx = ctx();
    let o = oracle();
    let p10 = o.solve(MultiIndex::new(1, 0)).unwrap();
    assert!(close(&p10.p.coeff(0), &Rational::from((2, 3)), ctx, 1e-40));
    let p11 = o.solve(MultiIndex::new(1, 1)).unwrap();
    assert!(close(&p11.p.coeff(0), &Rational::from((-13, 27)), ctx, 1e-40));
    assert!(p11.p.coeff(1).abs() < 1e-40);
    let p00 = o.solve(MultiIndex::new(0, 0)).unwrap();
    let b = recurrence_b(&p00.p, &p10.p).unwrap();
    assert!(close(&b, &Rational::from((-2, 3)), ctx, 1e-40));
    assert!(close(p00.h(1), &Rational::from((2, 3)), ctx, 1e-40));
    assert!(close(p10.h(1), &Rational::from((2, 81)), ctx, 1e-40));
    assert!(p10.h(2).abs() > 1e-3);
    let (a, _) = o.recurrence(MultiIndex::new(1, 0), 1).unwrap();
    assert!(close(&a, &Rational::from((1, 27)), ctx, 1e-40));
    assert!(close(&p10.type1(1).coeff(0), &Rational::from((3, 2)), ctx, 1e-40));
    assert!(p10.type1(2).coeff(0).abs() < 1e-60);
    let p01 = o.solve(MultiIndex::new(0, 1)).unwrap();
    assert!(close(&p01.type1(2).coeff(0), &Rational::from((3, 2)), ctx, 1e-40));
}

#[test]
fn type2_matches_exact_rational_solve() {
    let ctx = ctx();
    let o = oracle();
    for (n1, n2) in [(2, 1), (2, 2), (3, 1), (1, 4), (3, 3), (5, 4)] {
        let r = o.solve(MultiIndex::new(n1, n2)).unwrap();
        let exact = exact_type2(n1 as usize, n2 as usize);
        assert_eq!(r.p.degree(), exact.len() - 1);
        for (k, q) in exact.iter().enumerate() {
            assert!(close(&r.p.coeff(k), q, ctx, 1e-50), "({n1},{n2}) coefficient {k}");
        }
    }
}

#[test]
fn recurrence_residuals_up_to_twenty() {
    let o = oracle();
    let bound = Real::pow2(-128, 256);
    for total in 1..=20u32 {
        for n1 in 0..=total {
            let n = MultiIndex::new(n1, total - n1);
            for i in [1, 2] {
                if n.get(i) == 0 {
                    continue;
                }
                let r = o.recurrence_residual(n, i).unwrap();
                assert!(r <= bound, "{n}, i = {i}: {}", r.to_sci(3));
            }
        }
    }
}

#[test]
fn orthogonality_and_biorthogonality() {
    let ctx = ctx();
    let o = oracle();
    let t = o.moments(ctx.bits, 64).unwrap();
    let bound = ctx.tol();
    for (n1, n2) in [(4, 4), (6, 3), (2, 9)] {
        let n = MultiIndex::new(n1, n2);
        let r = o.solve(n).unwrap();
        assert!(orthogonality_residual(&r.p, n, &t.0, &t.1) <= bound);
        // A monic P of degree |n| − 1 pairs to the normalisation of Q_n.
        let below = o.solve(n.minus(1).unwrap()).unwrap();
        let pairing = biorthogonality(&below.p, &r.a1, &r.a2, &t.0, &t.1);
        assert!((pairing - ctx.cone()).abs() < 1e-50);
    }
    for (m, n) in [((1, 1), (3, 2)), ((2, 0), (2, 3)), ((0, 2), (4, 4))] {
        let m = MultiIndex::new(m.0, m.1);
        let n = MultiIndex::new(n.0, n.1);
        let pm = o.solve(m).unwrap();
        let rn = o.solve(n).unwrap();
        let v = biorthogonality(&pm.p, &rn.a1, &rn.a2, &t.0, &t.1);
        assert!(v.abs() < 1e-50, "{m} against {n}");
    }
}

#[test]
fn ladder_reports_agreement() {
    let o = oracle();
    let r = o.solve(MultiIndex::new(10, 10)).unwrap();
    assert!(!r.ill_conditioned);
    assert!(r.agreement_bits >= 128.0);
    assert!(r.bits > 256 && r.bits <= PRECISION_CAP);
    assert_eq!(r.p.coeffs[0].prec(), 256);
}

#[test]
fn zeros_split_between_intervals() {
    let ctx = ctx();
    let o = oracle();
    let g = Geometry::g0(ctx);
    for (n1, n2) in [(3, 3), (5, 2), (1, 7), (8, 8)] {
        let r = o.solve(MultiIndex::new(n1, n2)).unwrap();
        let z = zero_counts(&r.p, &g).unwrap();
        assert_eq!((z.in1, z.in2, z.elsewhere), (n1 as usize, n2 as usize, 0));
        let (f1, f2, ties) = split_by_interval(&r.p, &g).unwrap();
        assert_eq!((f1.degree(), f2.degree(), ties), (n1 as usize, n2 as usize, 0));
        let product = f1.mul(&f2);
        let gap = product.sub(&r.p).norm_inf();
        assert!(gap < Real::pow2(-80, 256));
    }
}

#[test]
fn diagonal_parity() {
    let ctx = ctx();
    let o = oracle();
    for k in 1..=6 {
        let r = o.solve(MultiIndex::new(k, k)).unwrap();
        assert_eq!(r.p.parity(&ctx.third()), Some(1), "P_({k},{k}) is even");
    }
}

#[test]
fn second_kind_expansion() {
    let ctx = ctx();
    let o = oracle();
    let r = o.solve(MultiIndex::new(1, 0)).unwrap();
    let z = ctx.complex(1e4, 0.0);
    let v = second_kind(&r.p, &o.weights.0, &z, ctx).unwrap() * z.powi(2);
    assert!(((&v.re - 2.0 / 81.0) / (2.0 / 81.0)).abs() < 1e-3);
    let zc = ctx.complex(0.2, 0.5);
    let up = second_kind(&r.p, &o.weights.0, &zc, ctx).unwrap();
    let down = second_kind(&r.p, &o.weights.0, &zc.conj(), ctx).unwrap();
    assert!((up.conj() - down).abs() < 1e-60);
    assert!(second_kind(&r.p, &o.weights.0, &ctx.complex(-0.5, 0.0), ctx).is_err());
}

#[test]
fn complex_weights_solve() {
    let ctx = ctx();
    let g = Geometry::g0(ctx);
    let w1 = WeightSpec::new(WeightKind::ComplexPoly, vec![ctx.complex(0.0, 2.0), ctx.cone()], g.alpha1.clone(), g.beta1.clone(), ctx);
    let w2 = WeightSpec::lebesgue(g.alpha2.clone(), g.beta2.clone(), ctx);
    let o = MopOracle::new((w1.unwrap(), w2.unwrap()), ctx);
    let n = MultiIndex::new(3, 2);
    let r = o.solve(n).unwrap();
    let t = o.moments(ctx.bits, 16).unwrap();
    assert!(orthogonality_residual(&r.p, n, &t.0, &t.1) <= ctx.tol());
    assert!(r.p.coeffs.iter().any(|c| c.im.abs() > 1e-6));
    assert!(Poly::one(ctx).degree() == 0);
}
