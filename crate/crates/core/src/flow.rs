//! The differential system for R(c) = c²A2 / ((1−c)²A1), B = B2 − B1 and B2
//! on the pushed regimes.

use crate::curve::{limit_params, CurveSolver, Regime};
use crate::error::{Error, Result};
use crate::kernel::ode_solve;
use crate::precision::PrecisionCtx;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub c: Real,
    pub r: Real,
    pub b: Real,
    pub b2: Real,
}

/// Derivatives (R′, (log B)′, B2′).
#[derive(Clone, Debug)]
pub struct FlowDerivative {
    pub dr: Real,
    pub dlog_b: Real,
    pub db2: Real,
}

impl FlowState {
    /// (A1, A2, B1, B2) from the constraint c⁻²A1 + (1−c)⁻²A2 = B².
    pub fn recover(&self) -> (Real, Real, Real, Real) {
        let b2sq = self.b.square();
        let one_r = 1.0 + &self.r;
        let a1 = self.c.square() * &b2sq / &one_r;
        let a2 = (1.0 - &self.c).square() * &b2sq * &self.r / &one_r;
        (a1, a2, &self.b2 - &self.b, self.b2.clone())
    }
}

fn denominator(c: &Real, r: &Real) -> Real {
    1.0 - c.square() + c * (2.0 - c) * r
}

pub fn flow_field(s: &FlowState, ctx: PrecisionCtx) -> Result<FlowDerivative> {
    if !(s.r > 0.0 && s.b > 0.0) {
        return Err(Error::DomainViolation(format!("flow state R = {}, B = {}", s.r.to_sci(6), s.b.to_sci(6))));
    }
    let d = denominator(&s.c, &s.r);
    if d <= ctx.tol() {
        return Err(Error::DenominatorVanishes(s.c.to_f64()));
    }
    let dr = &s.r * (1.0 + &s.r) * 6.0 / &d;
    let dlog_b = (1.0 - &s.c - &s.c * &s.r) * -2.0 / &d;
    let db2 = &s.c * &s.b * &dlog_b;
    Ok(FlowDerivative { dr, dlog_b, db2 })
}

/// Exact state at c = 0 (or c = 1) from the limit data.
pub fn boundary_state(solver: &CurveSolver, at: u8) -> Result<FlowState> {
    let lim = limit_params(&solver.geometry, at)?;
    let ctx = solver.ctx;
    Ok(match at {
        0 => FlowState { c: ctx.zero(), r: &lim.a2 / &lim.slope, b: &lim.b2 - &lim.b1, b2: lim.b2 },
        _ => FlowState { c: ctx.one(), r: &lim.slope / &lim.a1, b: &lim.b2 - &lim.b1, b2: lim.b2 },
    })
}

/// Integrates the flow and samples it at `cs`, all inside one pushed regime.
///
/// Integration starts from the exact boundary data at c = 0 (left regime) or
/// c = 1 (right regime), where the system in (R, log B, B2) is regular, and is
/// restarted at every output point so no interpolation error enters the table.
pub fn integrate_flow_at(solver: &CurveSolver, cs: &[Real], tol: f64) -> Result<Vec<FlowState>> {
    let ctx = solver.ctx;
    if cs.is_empty() {
        return Ok(Vec::new());
    }
    let (c_star, c_2star) = solver.thresholds()?;
    let left = cs.iter().all(|c| *c > 0.0 && *c < c_star);
    let right = cs.iter().all(|c| *c > c_2star && *c < 1.0);
    if !left && !right {
        return Err(Error::DomainViolation(format!(
            "flow range must lie in (0, c*) or (c**, 1); c* = {}, c** = {}",
            c_star.to_sci(12),
            c_2star.to_sci(12)
        )));
    }
    let start = boundary_state(solver, if left { 0 } else { 1 })?;
    let mut order: Vec<usize> = (0..cs.len()).collect();
    order.sort_by(|&a, &b| if left { cs[a].total_cmp(&cs[b]) } else { cs[b].total_cmp(&cs[a]) });
    let field = |c: &Real, y: &[Real]| -> Result<Vec<Real>> {
        let s = FlowState { c: c.clone(), r: y[0].clone(), b: y[1].exp(), b2: y[2].clone() };
        let d = flow_field(&s, ctx)?;
        Ok(vec![d.dr, d.dlog_b, d.db2])
    };
    let mut t = start.c.clone();
    let mut y = vec![start.r.clone(), start.b.ln(), start.b2.clone()];
    let mut out = vec![None; cs.len()];
    for &k in &order {
        let path = ode_solve(field, &t, &y, &cs[k], tol, ctx)?;
        y = path.last().to_vec();
        t = cs[k].clone();
        out[k] = Some(FlowState { c: t.clone(), r: y[0].clone(), b: y[1].exp(), b2: y[2].clone() });
    }
    Ok(out.into_iter().map(|s| s.expect("every output visited")).collect())
}

/// `n` equally spaced samples on [c_from, c_to].
pub fn integrate_flow(solver: &CurveSolver, c_from: &Real, c_to: &Real, n: usize, tol: f64) -> Result<Vec<FlowState>> {
    let n = n.max(2);
    let cs: Vec<Real> = (0..n).map(|k| c_from + &((c_to - c_from) * (k as f64) / ((n - 1) as f64))).collect();
    integrate_flow_at(solver, &cs, tol)
}

/// β′_{c,1} = 2(cR2 − (1−c)R1)B′/B² = 6B(R/R′)((log B)′)² against a centred
/// difference of β_{c,1} from the algebraic solver. Returns (β′, |β′ − FD|).
pub fn beta1_prime_check(solver: &CurveSolver, state: &FlowState, h: f64) -> Result<(Real, Real)> {
    let ctx = solver.ctx;
    if solver.regime_of(&state.c)? != Regime::PushedLeft {
        return Err(Error::DomainViolation("beta1_prime_check needs a pushed-left state".into()));
    }
    let d = flow_field(state, ctx)?;
    let beta_prime = &state.r / &d.dr * d.dlog_b.square() * &state.b * 6.0;
    let plus = solver.solve(&(&state.c + h))?;
    let minus = solver.solve(&(&state.c - h))?;
    let fd = (&plus.beta_c1 - &minus.beta_c1) / (2.0 * h);
    let residual = (&beta_prime - &fd).abs();
    Ok((beta_prime, residual))
}

/// Largest relative deviation of the recovered (A1, A2, B1, B2) from the
/// algebraic solver over the given states.
pub fn max_deviation(solver: &CurveSolver, states: &[FlowState]) -> Result<Real> {
    let ctx = solver.ctx;
    let mut worst = ctx.zero();
    for s in states {
        let p = solver.solve(&s.c)?;
        let (a1, a2, b1, b2) = s.recover();
        for (u, v) in [(&a1, &p.a1), (&a2, &p.a2), (&b1, &p.b1), (&b2, &p.b2)] {
            worst = worst.max((u - v).abs() / v.abs());
        }
    }
    Ok(worst)
}
