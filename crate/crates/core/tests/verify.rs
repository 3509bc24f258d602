use angelesco::curve::{CurveSolver, Geometry, Side};
use angelesco::io::lebesgue_weights;
use angelesco::surface::MultiIndex;
use angelesco::szego::SzegoCache;
use angelesco::verify::*;
use angelesco::PrecisionCtx;

fn ctx() -> PrecisionCtx {
    PrecisionCtx::default()
}

fn solver() -> CurveSolver {
    CurveSolver::new(Geometry::g0(ctx()), ctx())
}

fn verifier() -> Verifier {
    let ctx = ctx();
    Verifier::new(solver(), lebesgue_weights(&Geometry::g0(ctx), ctx).unwrap())
}

fn opts(v: &Verifier) -> CompareOptions {
    CompareOptions { probes: Probe::defaults(&v.solver), min_distance: 0.05 }
}

fn row(k: u32, ray: usize, obs: Observable, probe: &str, e: f64) -> ErrorRow {
    let ctx = ctx();
    ErrorRow {
        n: MultiIndex::new(k, k),
        k,
        ray,
        c: 0.5,
        eps: 1.0 / k as f64,
        observable: obs,
        probe: probe.into(),
        predicted: ctx.cone(),
        observed: ctx.cone(),
        rel_error: e,
    }
}

#[test]
fn schedule_kinds_round_trip() {
    for s in ["diagonal", "drifting", "ray:1:2", "ray:3:1", "alternating:1:3"] {
        let k: ScheduleKind = s.parse().unwrap();
        assert_eq!(k.to_string(), s);
    }
    for bad in ["", "diagonal:1", "ray:1", "ray:a:2", "alternating:1:0", "ray:1:2:3", "spiral"] {
        assert!(bad.parse::<ScheduleKind>().is_err(), "{bad:?}");
    }
}

#[test]
fn schedule_ranges() {
    assert!(IndexSchedule::new(ScheduleKind::Diagonal, 0, 4).is_err());
    assert!(IndexSchedule::new(ScheduleKind::Diagonal, 4, 4).is_err());
    assert!(IndexSchedule::new(ScheduleKind::Diagonal, 5, 4).is_err());
    let ray = IndexSchedule::new(ScheduleKind::Ray(1, 2), 2, 4).unwrap();
    let ns: Vec<_> = ray.indices().iter().map(|a| (a.n.n1, a.n.n2, a.k)).collect();
    assert_eq!(ns, vec![(2, 4, 2), (3, 6, 3), (4, 8, 4)]);
    let drift = IndexSchedule::new(ScheduleKind::Drifting, 1, 9).unwrap();
    let last = drift.indices().last().unwrap().n;
    assert_eq!(last, MultiIndex::new(9, 27));
}

#[test]
fn observables_per_theorem() {
    assert_eq!(Observable::for_theorem(1).unwrap().len(), 5);
    assert_eq!(Observable::for_theorem(2).unwrap().len(), 6);
    assert_eq!(Observable::for_theorem(3).unwrap().len(), 4);
    assert!(Observable::for_theorem(0).is_err());
    assert!(Observable::for_theorem(4).is_err());
    assert_eq!(Observable::PBoundary(2).to_string(), "P_bdry_2");
    assert_eq!(Observable::RecB(1).to_string(), "b_1");
}

#[test]
fn probes_parse_and_defaults() {
    let ctx = ctx();
    let p = Probe::parse(" -3+2i ", ctx).unwrap();
    assert_eq!(p.label, "-3+2i");
    assert!((p.z - ctx.complex(-3.0, 2.0)).abs() < 1e-70);
    assert!(Probe::parse("2+", ctx).is_err());
    let d = Probe::defaults(&solver());
    assert_eq!(d.len(), 4);
    assert!((&d[3].z - &ctx.complex(0.0, 0.5)).abs() < 1e-70);
}

#[test]
fn diagonal_recurrence_prediction_is_constant() {
    let s = solver();
    let half = s.solve(&s.ctx.ratio(1, 2)).unwrap();
    assert!((&half.a1 - &half.a2).abs() < 1e-60);
    for k in [1, 4, 9, 30] {
        let n = MultiIndex::new(k, k);
        let (a1, b1) = predicted_recurrence(&s, n, 1).unwrap();
        let (a2, b2) = predicted_recurrence(&s, n, 2).unwrap();
        assert!((&a1 - &half.a1).abs() < 1e-60);
        assert!((&a1 - &a2).abs() < 1e-60);
        // n + e_1 and n + e_2 are mirror images of each other.
        assert!((&b1 + &b2).abs() < 1e-50);
        let next = s.solve(&s.ctx.ratio(k as i64 + 1, 2 * k as i64 + 1)).unwrap();
        assert!((&b1 - &next.b1).abs() < 1e-60);
    }
}

#[test]
fn prediction_is_monic_at_infinity() {
    let ctx = ctx();
    let s = solver();
    for (n1, n2) in [(2, 2), (3, 5), (6, 2)] {
        let n = MultiIndex::new(n1, n2);
        let p = s.solve(&n.ratio(ctx)).unwrap();
        let cache = SzegoCache::new(p, lebesgue_weights(&Geometry::g0(ctx), ctx).unwrap(), ctx).unwrap();
        let z = ctx.complex(1e6, 0.0);
        let v = predicted_p(&cache, n, &z, Side::Off).unwrap() / z.powi(n.total() as i64);
        assert!((v - ctx.cone()).abs() < 1e-4, "{n}");
    }
}

#[test]
fn predicted_factors_multiply_to_predicted_p() {
    let ctx = ctx();
    let v = verifier();
    for (n1, n2) in [(1, 1), (4, 4), (3, 7), (5, 2)] {
        let n = MultiIndex::new(n1, n2);
        let cache = v.cache(n).unwrap();
        for z in [ctx.complex(2.0, 0.5), ctx.complex(-2.5, -1.0), ctx.complex(0.1, 3.0)] {
            let whole = predicted_p(&cache, n, &z, Side::Off).unwrap();
            let f1 = predicted_p_factor(&cache, n, 1, &z, Side::Off).unwrap();
            let f2 = predicted_p_factor(&cache, n, 2, &z, Side::Off).unwrap();
            let rel = ((f1 * f2 - &whole).abs() / whole.abs()).to_f64();
            assert!(rel < 1e-8, "{n}: {rel:e}");
        }
    }
}

#[test]
fn caches_are_shared_by_ratio() {
    let v = verifier();
    let a = v.cache(MultiIndex::new(2, 4)).unwrap();
    let b = v.cache(MultiIndex::new(5, 10)).unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
    let c = v.cache(MultiIndex::new(5, 5)).unwrap();
    assert!(!std::sync::Arc::ptr_eq(&a, &c));
}

#[test]
fn recurrence_error_decreases_along_diagonal() {
    let v = verifier();
    let sch = IndexSchedule::new(ScheduleKind::Diagonal, 2, 10).unwrap();
    let cmp = v.run_comparison(&sch, &Observable::for_theorem(3).unwrap(), &opts(&v)).unwrap();
    assert!(cmp.skipped.is_empty());
    assert_eq!(cmp.rows.len(), 9 * 4);
    for obs in [Observable::RecA(1), Observable::RecB(1), Observable::RecA(2)] {
        let trend = error_trend(&cmp.rows, obs, "-", 0);
        let tail: Vec<f64> = trend.iter().filter(|(k, _)| *k >= 4).map(|(_, e)| *e).collect();
        assert!(tail.last().unwrap() < tail.first().unwrap(), "{obs}: {trend:?}");
    }
    let checks = acceptance_checks(3, &sch, &cmp.rows);
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c.passed), "{checks:?}");
}

#[test]
fn exterior_p_error_decreases() {
    let v = verifier();
    let sch = IndexSchedule::new(ScheduleKind::Diagonal, 4, 8).unwrap();
    let cmp = v.run_comparison(&sch, &[Observable::P], &opts(&v)).unwrap();
    for probe in ["2", "2+i", "-3+2i"] {
        let t = error_trend(&cmp.rows, Observable::P, probe, 0);
        assert!(t.last().unwrap().1 < t[0].1, "{probe}: {t:?}");
    }
}

#[test]
fn close_probes_skip_the_index() {
    let ctx = ctx();
    let v = verifier();
    let sch = IndexSchedule::new(ScheduleKind::Diagonal, 2, 3).unwrap();
    let o = CompareOptions { probes: vec![Probe { label: "near".into(), z: ctx.complex(0.6, 0.01) }], min_distance: 0.05 };
    let cmp = v.run_comparison(&sch, &[Observable::P], &o).unwrap();
    assert!(cmp.rows.is_empty());
    assert_eq!(cmp.skipped.len(), 2);
    assert!(cmp.skipped[0].reason.starts_with("P:"));
}

#[test]
fn csv_rows_match_header() {
    let ctx = ctx();
    let mut r = row(3, 0, Observable::A(1), "2+i", 0.125);
    r.predicted = ctx.complex(1.0 / 3.0, -2.0);
    let line = r.csv(Some(5));
    assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    assert!(line.starts_with("3,3,0.5,0.3333333333333333,A_1,2+i,3.3333e-1,"), "{line}");
    assert!(line.ends_with(",0.125"));
    let full = r.csv(None);
    assert!(full.len() > line.len() + 50);
}

#[test]
fn acceptance_checks_on_synthetic_rows() {
    let sch = IndexSchedule::new(ScheduleKind::Diagonal, 2, 16).unwrap();
    let mut rows = Vec::new();
    for k in 2..=16 {
        let e = 0.2 / k as f64;
        rows.push(row(k, 0, Observable::RecA(1), "-", e));
        rows.push(row(k, 0, Observable::RecB(1), "-", 5.0 * e));
    }
    let checks = acceptance_checks(3, &sch, &rows);
    assert_eq!(checks.len(), 2);
    assert!(checks[0].passed);
    assert!(!checks[1].passed, "b_1 stays above 5%");
    let flat: Vec<_> = (2..=16).map(|k| row(k, 0, Observable::P, "2", 0.1)).collect();
    assert!(!acceptance_checks(1, &sch, &flat)[0].passed);
}

#[test]
fn alternating_constants_compared() {
    let sch = IndexSchedule::new(ScheduleKind::Alternating(1, 3), 2, 8).unwrap();
    let mut rows = Vec::new();
    for k in 2..=8 {
        let e = (1.0 / k as f64).cbrt();
        rows.push(row(k, 0, Observable::RecA(1), "-", 0.1 * e));
        rows.push(row(k, 1, Observable::RecA(1), "-", 0.15 * e));
    }
    let checks = acceptance_checks(3, &sch, &rows);
    let uniform = checks.iter().find(|c| c.name.starts_with("uniform")).unwrap();
    assert!(uniform.passed, "{}", uniform.detail);
    assert!((fit_uniform_constant(&rows, Observable::RecA(1), "-").unwrap() - 0.15).abs() < 1e-12);
}
