use angelesco::curve::{CurveSolver, Geometry};
use angelesco::flow::{integrate_flow_at, max_deviation};
use angelesco::io::{lebesgue_weights, load_geometry, load_weights, write_atomic, Table};
use angelesco::oracle::{zero_counts, MopOracle};
use angelesco::surface::{equilibrium_density, equilibrium_mass, MultiIndex};
use angelesco::szego::{surface_szego, szego_infinity, SzegoCache};
use angelesco::verify::{
    acceptance_checks, fit_uniform_constant, CompareOptions, IndexSchedule, Observable, Probe, ScheduleKind, Verifier, CSV_HEADER,
};
use angelesco::weight::WeightSpec;
use angelesco::{Complex, Error, PrecisionCtx, Real};

use crate::Common;

/// Smallest k of every verify schedule.
const K_MIN: u32 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_config() { 1 } else { 2 }, message: e.to_string() }
    }
}

fn config(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn numeric(e: Error) -> Failure {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::InvalidGeometry(_) => e.into(),
        other => Failure { code: 2, message: other.to_string() },
    }
}

struct Setup {
    ctx: PrecisionCtx,
    solver: CurveSolver,
}

fn setup(common: &Common) -> Result<Setup, Failure> {
    let ctx = PrecisionCtx::new(common.bits)?;
    let geometry = match &common.geometry {
        Some(path) => load_geometry(path, ctx)?,
        None => Geometry::g0(ctx),
    };
    Ok(Setup { ctx, solver: CurveSolver::new(geometry, ctx) })
}

fn weights(common: &Common, s: &Setup) -> Result<(WeightSpec, WeightSpec), Failure> {
    Ok(match &common.weights {
        Some(path) => load_weights(path, &s.solver.geometry, s.ctx)?,
        None => lebesgue_weights(&s.solver.geometry, s.ctx)?,
    })
}

fn digits(common: &Common) -> Option<usize> {
    (!common.full_precision).then_some(17)
}

fn fmt_real(r: &Real, d: Option<usize>) -> String {
    match d {
        Some(d) => r.to_sci(d),
        None => r.to_string(),
    }
}

fn fmt_complex(z: &Complex, d: Option<usize>) -> String {
    let d = d.or(Some(17));
    let im = fmt_real(&z.im, d);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fmt_real(&z.re, d))
}

fn provenance(table: &mut Table, common: &Common, s: &Setup) {
    let g = &s.solver.geometry;
    table.note("bits", s.ctx.bits.to_string());
    table.note("guard_bits", s.ctx.guard_bits.to_string());
    table
        .note("geometry", format!("[{}, {}] u [{}, {}]", g.alpha1.to_sci(17), g.beta1.to_sci(17), g.alpha2.to_sci(17), g.beta2.to_sci(17)));
    let w = match &common.weights {
        Some(p) => p.display().to_string(),
        None => "lebesgue".into(),
    };
    table.note("weights", w);
}

fn emit(common: &Common, table: &Table) -> Result<(), Failure> {
    let text = table.render();
    match &common.out {
        Some(path) => write_atomic(path, &text).map_err(|e| Failure { code: 1, message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Points A, A+STEP, …, B of `A:B:STEP`.
fn parse_sweep(spec: &str, ctx: PrecisionCtx) -> Result<Vec<Real>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(config(format!("sweep {spec:?} is not A:B:STEP")));
    }
    let a = ctx.parse(parts[0])?;
    let b = ctx.parse(parts[1])?;
    let step = ctx.parse(parts[2])?;
    if !(step > 0.0) || b < a {
        return Err(config(format!("sweep {spec:?} needs A ≤ B and STEP > 0")));
    }
    let count = ((&b - &a) / &step).to_f64().round() as usize + 1;
    if count > 1_000_000 {
        return Err(config(format!("sweep {spec:?} has too many points")));
    }
    Ok((0..count).map(|k| &a + &(&step * k as f64)).collect())
}

pub fn curve(common: &Common, c: Option<&str>, sweep: Option<&str>) -> Result<(), Failure> {
    let s = setup(common)?;
    let cs = match (c, sweep) {
        (Some(c), _) => vec![s.ctx.parse(c)?],
        (None, Some(sw)) => parse_sweep(sw, s.ctx)?,
        (None, None) => return Err(config("curve needs --c or --sweep")),
    };
    let d = digits(common);
    let mut table = Table::new("c,regime,A1,A2,B1,B2,beta_c1,alpha_c2");
    for c in &cs {
        let p = s.solver.solve(c).map_err(|e| {
            let mut f = numeric(e);
            f.message = format!("c = {}: {}", c.to_sci(17), f.message);
            f
        })?;
        table.push(format!(
            "{},{},{},{},{},{},{},{}",
            c.to_sci(17),
            p.regime,
            fmt_real(&p.a1, d),
            fmt_real(&p.a2, d),
            fmt_real(&p.b1, d),
            fmt_real(&p.b2, d),
            fmt_real(&p.beta_c1, d),
            fmt_real(&p.alpha_c2, d)
        ));
    }
    let (c1, c2) = s.solver.thresholds().map_err(numeric)?;
    table.note("c_star", fmt_real(&c1, d));
    table.note("c_2star", fmt_real(&c2, d));
    provenance(&mut table, common, &s);
    emit(common, &table)
}

pub fn thresholds(common: &Common) -> Result<(), Failure> {
    let s = setup(common)?;
    let (c1, c2) = s.solver.thresholds().map_err(numeric)?;
    let d = digits(common);
    let mut table = Table::new("c_star,c_2star");
    table.push(format!("{},{}", fmt_real(&c1, d), fmt_real(&c2, d)));
    provenance(&mut table, common, &s);
    emit(common, &table)
}

pub fn ode(common: &Common, sweep: &str, tol: f64) -> Result<(), Failure> {
    let s = setup(common)?;
    if !(tol > 0.0) {
        return Err(config("--tol must be positive"));
    }
    let cs = parse_sweep(sweep, s.ctx)?;
    let states = integrate_flow_at(&s.solver, &cs, tol).map_err(numeric)?;
    let d = digits(common);
    let mut table = Table::new("c,R,B,B2,A1,A2,B1,rel_deviation");
    for st in &states {
        let (a1, a2, b1, b2) = st.recover();
        let p = s.solver.solve(&st.c).map_err(numeric)?;
        let dev = [(&a1, &p.a1), (&a2, &p.a2), (&b1, &p.b1), (&b2, &p.b2)]
            .into_iter()
            .map(|(u, v)| ((u - v).abs() / v.abs()).to_f64())
            .fold(0.0, f64::max);
        table.push(format!(
            "{},{},{},{},{},{},{},{:e}",
            st.c.to_sci(17),
            fmt_real(&st.r, d),
            fmt_real(&st.b, d),
            fmt_real(&st.b2, d),
            fmt_real(&a1, d),
            fmt_real(&a2, d),
            fmt_real(&b1, d),
            dev
        ));
    }
    let worst = max_deviation(&s.solver, &states).map_err(numeric)?;
    table.note("max_rel_deviation", worst.to_sci(6));
    table.note("ode_tol", format!("{tol:e}"));
    table.note("integrator", "adaptive Runge-Kutta from the exact boundary state, restarted at each output point");
    provenance(&mut table, common, &s);
    eprintln!("max relative deviation {}", worst.to_sci(6));
    emit(common, &table)
}

pub fn measure(common: &Common, c: &str, points: usize) -> Result<(), Failure> {
    let s = setup(common)?;
    if points == 0 {
        return Err(config("--points must be positive"));
    }
    let p = s.solver.solve(&s.ctx.parse(c)?).map_err(numeric)?;
    let d = digits(common);
    let mut table = Table::new("interval,x,density");
    for i in [1, 2] {
        let (a, b) = p.support(i);
        for k in 0..points {
            let x = &a + &((&b - &a) * ((k as f64 + 0.5) / points as f64));
            let v = equilibrium_density(&p, i, &x, s.ctx).map_err(numeric)?;
            table.push(format!("{i},{},{}", fmt_real(&x, d), fmt_real(&v, d)));
        }
    }
    table.note("regime", p.regime.to_string());
    table.note("mass1", fmt_real(&equilibrium_mass(&p, 1, s.ctx).map_err(numeric)?, d));
    table.note("mass2", fmt_real(&equilibrium_mass(&p, 2, s.ctx).map_err(numeric)?, d));
    table.note("grid", format!("{points} midpoints per interval"));
    provenance(&mut table, common, &s);
    emit(common, &table)
}

pub fn szego(common: &Common, c: &str, probes: &[String]) -> Result<(), Failure> {
    let s = setup(common)?;
    let w = weights(common, &s)?;
    let p = s.solver.solve(&s.ctx.parse(c)?).map_err(numeric)?;
    let cache = SzegoCache::new(p, w, s.ctx).map_err(numeric)?;
    let d = digits(common);
    let mut table = Table::new("probe,sheet,re,im");
    let inf = szego_infinity(&cache);
    for (k, v) in inf.s.iter().enumerate() {
        table.push(format!("inf,{k},{},{}", fmt_real(&v.re, d), fmt_real(&v.im, d)));
    }
    let mut worst = 0.0f64;
    for label in probes {
        let z = Complex::parse(label, s.ctx.bits)?;
        let mut prod = s.ctx.cone();
        for k in 0..3 {
            let v = surface_szego(&cache, k, &z, angelesco::curve::Side::Off).map_err(numeric)?;
            table.push(format!("{label},{k},{},{}", fmt_real(&v.re, d), fmt_real(&v.im, d)));
            prod *= v;
        }
        worst = worst.max((prod - s.ctx.cone()).abs().to_f64());
    }
    table.note("s_n1", fmt_complex(&inf.s_n1, d));
    table.note("s_n2", fmt_complex(&inf.s_n2, d));
    table.note("branch_product_deviation", format!("{worst:e}"));
    table.note("quadrature", "tanh-sinh on the two arcs of each contour, levels 3..13");
    provenance(&mut table, common, &s);
    emit(common, &table)
}

pub fn mop(common: &Common, n: &[u32]) -> Result<(), Failure> {
    let s = setup(common)?;
    let [n1, n2] = n else {
        return Err(config("--n needs N1,N2"));
    };
    let n = MultiIndex::new(*n1, *n2);
    let w = weights(common, &s)?;
    let positive = w.0.is_positive() && w.1.is_positive();
    let oracle = MopOracle::new(w, s.ctx);
    let r = oracle.solve(n).map_err(numeric)?;
    let d = digits(common);
    let mut table = Table::new("index,real,imag");
    for (k, c) in r.p.coeffs.iter().enumerate() {
        table.push(format!("{k},{},{}", fmt_real(&c.re, d), fmt_real(&c.im, d)));
    }
    table.note("n", n.to_string());
    table.note("h_n1", fmt_complex(&r.h.0, d));
    table.note("h_n2", fmt_complex(&r.h.1, d));
    for i in [1, 2] {
        if n.get(i) > 0 {
            table.note(format!("A{i}_leading"), fmt_complex(r.type1(i).leading(), d));
            let (a, b) = oracle.recurrence(n, i).map_err(numeric)?;
            table.note(format!("a_n{i}"), fmt_complex(&a, d));
            table.note(format!("b_n{i}"), fmt_complex(&b, d));
        }
    }
    if positive && n.total() > 0 {
        let z = zero_counts(&r.p, &s.solver.geometry).map_err(numeric)?;
        table.note("zeros", format!("{} in interval 1, {} in interval 2, {} elsewhere", z.in1, z.in2, z.elsewhere));
    }
    table.note("ladder_bits", r.bits.to_string());
    table.note("agreement_bits", format!("{:.0}", r.agreement_bits));
    provenance(&mut table, common, &s);
    emit(common, &table)
}

pub fn verify(common: &Common, thm: u8, schedule: &str, kmax: u32, probes: Option<&[String]>) -> Result<(), Failure> {
    let kind: ScheduleKind = schedule.parse()?;
    if kmax <= K_MIN {
        return Err(config(format!("--kmax {kmax} leaves fewer than two schedule points (k starts at {K_MIN})")));
    }
    let observables = Observable::for_theorem(thm)?;
    let s = setup(common)?;
    let w = weights(common, &s)?;
    let schedule = IndexSchedule::new(kind, K_MIN, kmax)?;
    let probes = match probes {
        Some(list) => list.iter().map(|p| Probe::parse(p, s.ctx)).collect::<Result<Vec<_>, _>>()?,
        None => Probe::defaults(&s.solver),
    };
    let opts = CompareOptions { probes, min_distance: 0.05 };
    let setup_probe_note = opts.probes.iter().map(|p| p.label.clone()).collect::<Vec<_>>().join(" ");
    let verifier = Verifier::new(s.solver, w);
    let cmp = verifier.run_comparison(&schedule, &observables, &opts).map_err(numeric)?;
    let s = Setup { ctx: verifier.ctx, solver: CurveSolver::new(verifier.solver.geometry.clone(), verifier.ctx) };
    let d = digits(common);
    let mut table = Table::new(CSV_HEADER);
    for r in &cmp.rows {
        table.push(r.csv(d));
    }
    let (obs, probe) = match thm {
        1 => (Observable::P, "2"),
        2 => (Observable::A(1), "2+i"),
        _ => (Observable::RecA(1), "-"),
    };
    if let Some(c) = fit_uniform_constant(&cmp.rows, obs, probe) {
        let line = format!("uniform constant C = {c:.4e} for {obs} at probe {probe} (rel_error <= C eps^(1/3))");
        eprintln!("{line}");
        table.note("uniform_constant", format!("{c:.6e}"));
    }
    let checks = acceptance_checks(thm, &schedule, &cmp.rows);
    let mut failed = false;
    for ch in &checks {
        let status = if ch.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {}: {}", ch.name, ch.detail);
        table.note(format!("check {}", ch.name), format!("{status} ({})", ch.detail));
        failed |= !ch.passed;
    }
    for sk in &cmp.skipped {
        table.note(format!("skipped {}", sk.n), sk.reason.clone());
    }
    for note in &cmp.notes {
        table.note("note", note.clone());
    }
    table.note("theorem", thm.to_string());
    table.note("schedule", format!("{kind} k={K_MIN}..={kmax}"));
    table.note("probes", setup_probe_note);
    table.note("szego_quadrature", "tanh-sinh on the two arcs of each contour, levels 3..13");
    table.note("oracle", "monomial moment systems, precision ladder P/2P up to 2048 bits");
    provenance(&mut table, common, &s);
    emit(common, &table)?;
    if failed {
        return Err(Failure { code: 3, message: "acceptance check failed".into() });
    }
    Ok(())
}
