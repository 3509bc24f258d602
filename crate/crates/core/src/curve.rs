//! Conformal-map data of the three-sheeted genus-zero surface.
//!
//! For a ratio c the surface is uniformised by
//! z(χ) = χ + A1/(χ−B1) + A2/(χ−B2); its branch points are the critical
//! values of z, and the sheets are the three preimages of a base point z.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::kernel::{newton_solve, poly_roots, Poly, QuadratureRule};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};

const C0: f64 = 1e-3;
const STEP: f64 = 1e-2;
const STEP_FLOOR: f64 = 1.0 / 1048576.0;
const NEWTON_ITERS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    pub alpha1: Real,
    pub beta1: Real,
    pub alpha2: Real,
    pub beta2: Real,
}

impl Geometry {
    pub fn new(alpha1: Real, beta1: Real, alpha2: Real, beta2: Real) -> Result<Self> {
        if !(alpha1 < beta1 && beta1 < alpha2 && alpha2 < beta2) {
            return Err(Error::InvalidGeometry(format!(
                "need alpha1 < beta1 < alpha2 < beta2, got {} {} {} {}",
                alpha1.to_sci(8),
                beta1.to_sci(8),
                alpha2.to_sci(8),
                beta2.to_sci(8)
            )));
        }
        Ok(Geometry { alpha1, beta1, alpha2, beta2 })
    }

    pub fn parse(a1: &str, b1: &str, a2: &str, b2: &str, ctx: PrecisionCtx) -> Result<Self> {
        Geometry::new(ctx.parse(a1)?, ctx.parse(b1)?, ctx.parse(a2)?, ctx.parse(b2)?)
    }

    /// [−1, −1/3] ∪ [1/3, 1].
    pub fn g0(ctx: PrecisionCtx) -> Self {
        Geometry::new(ctx.int(-1), ctx.ratio(-1, 3), ctx.ratio(1, 3), ctx.one()).expect("valid")
    }

    pub fn interval(&self, i: usize) -> (Real, Real) {
        match i {
            1 => (self.alpha1.clone(), self.beta1.clone()),
            _ => (self.alpha2.clone(), self.beta2.clone()),
        }
    }

    pub fn is_symmetric(&self, tol: &Real) -> bool {
        (&self.alpha1 + &self.beta2).abs() <= *tol && (&self.beta1 + &self.alpha2).abs() <= *tol
    }

    pub fn prec(&self) -> u32 {
        self.alpha1.prec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    PushedLeft,
    Balanced,
    PushedRight,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::PushedLeft => "pushed-left",
            Regime::Balanced => "balanced",
            Regime::PushedRight => "pushed-right",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
    Off,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveParams {
    pub c: Real,
    pub a1: Real,
    pub a2: Real,
    pub b1: Real,
    pub b2: Real,
    pub regime: Regime,
    pub beta_c1: Real,
    pub alpha_c2: Real,
    pub chi_star: Real,
    /// Real critical points χ1 < B1 < χ2 < χ3 < B2 < χ4.
    pub crit: [Real; 4],
    pub geometry: Geometry,
}

impl CurveParams {
    pub fn prec(&self) -> u32 {
        self.a1.prec()
    }

    pub fn a(&self, i: usize) -> &Real {
        if i == 1 {
            &self.a1
        } else {
            &self.a2
        }
    }

    pub fn b(&self, i: usize) -> &Real {
        if i == 1 {
            &self.b1
        } else {
            &self.b2
        }
    }

    /// B = B2 − B1.
    pub fn gap(&self) -> Real {
        &self.b2 - &self.b1
    }

    /// Δ_{c,i}.
    pub fn support(&self, i: usize) -> (Real, Real) {
        if i == 1 {
            (self.geometry.alpha1.clone(), self.beta_c1.clone())
        } else {
            (self.alpha_c2.clone(), self.geometry.beta2.clone())
        }
    }

    /// The four branch points α1, β_{c,1}, α_{c,2}, β2.
    pub fn branch_points(&self) -> [Real; 4] {
        [self.geometry.alpha1.clone(), self.beta_c1.clone(), self.alpha_c2.clone(), self.geometry.beta2.clone()]
    }

    pub fn z_of(&self, chi: &Complex) -> Complex {
        let t1 = Complex::from_real(self.a1.clone()) / (chi - &self.b1);
        let t2 = Complex::from_real(self.a2.clone()) / (chi - &self.b2);
        chi + &t1 + &t2
    }

    pub fn dz_of(&self, chi: &Complex) -> Complex {
        let u1 = (chi - &self.b1).recip();
        let u2 = (chi - &self.b2).recip();
        let p = chi.prec();
        Complex::one(p) - (&u1 * &u1).scale(&self.a1) - (&u2 * &u2).scale(&self.a2)
    }

    pub fn z_real(&self, chi: &Real) -> Real {
        chi + &(&self.a1 / (chi - &self.b1)) + &(&self.a2 / (chi - &self.b2))
    }

    /// g(χ) = A1/|χ−B1|² + A2/|χ−B2|²; the curves g = 1 bound the sheets 1, 2.
    pub fn g_of(&self, chi: &Complex) -> Real {
        &self.a1 / (chi - &self.b1).norm_sqr() + &self.a2 / (chi - &self.b2).norm_sqr()
    }

    /// Residuals |z(χ_j) − e_j| of the critical values against the branch points.
    pub fn critical_value_residual(&self) -> Real {
        let prec = self.prec();
        self.crit.iter().zip(self.branch_points().iter()).map(|(x, e)| (self.z_real(x) - e).abs()).fold(Real::zero(prec), Real::max)
    }
}

/// c → 0 or c → 1 boundary data.
#[derive(Clone, Debug)]
pub struct LimitData {
    pub at: u8,
    pub a1: Real,
    pub a2: Real,
    pub b1: Real,
    pub b2: Real,
    /// lim c⁻²A1 at 0, or lim (1−c)⁻²A2 at 1.
    pub slope: Real,
}

/// φ(z) = (z − (a+b)/2 + w(z))/2.
pub fn phi_map(a: &Real, b: &Real, z: &Complex) -> Result<Complex> {
    if on_segment(a, b, z) {
        return Err(Error::OnCut { a: a.to_f64(), b: b.to_f64() });
    }
    let mid = (a + b) * 0.5;
    Ok((z - &mid + w_map(a, b, z, Side::Off)) * 0.5)
}

fn on_segment(a: &Real, b: &Real, z: &Complex) -> bool {
    z.im.is_zero() && *a < z.re && z.re < *b
}

/// w(z) = √((z−a)(z−b)) with w(z) ~ z at ∞; on the open cut the side flag
/// selects w±(x) = ±i√((x−a)(b−x)).
pub fn w_map(a: &Real, b: &Real, z: &Complex, side: Side) -> Complex {
    if z.im.is_zero() && *a < z.re && z.re < *b && side != Side::Off {
        let m = ((&z.re - a) * (b - &z.re)).sqrt();
        let m = if side == Side::Plus { m } else { -m };
        return Complex::new(Real::zero(z.prec()), m);
    }
    let za = z - a;
    let zb = z - b;
    if z.im.is_zero() {
        // Keep both factors on the same side of their branch cuts.
        let za = Complex::new(za.re, Real::zero(z.prec()));
        let zb = Complex::new(zb.re, Real::zero(z.prec()));
        return za.sqrt() * zb.sqrt();
    }
    za.sqrt() * zb.sqrt()
}

pub fn limit_params(geometry: &Geometry, at: u8) -> Result<LimitData> {
    let (a1, b1, a2, b2) = (&geometry.alpha1, &geometry.beta1, &geometry.alpha2, &geometry.beta2);
    match at {
        0 => {
            let aa2 = ((b2 - a2) * 0.25).square();
            let bb2 = (a2 + b2) * 0.5;
            let phi = phi_map(a2, b2, &Complex::from_real(a1.clone()))?.re;
            Ok(LimitData { at, a1: Real::zero(a1.prec()), a2: aa2.clone(), b1: &bb2 + &phi, b2: bb2, slope: phi.square() - aa2 })
        }
        1 => {
            let aa1 = ((b1 - a1) * 0.25).square();
            let bb1 = (a1 + b1) * 0.5;
            let phi = phi_map(a1, b1, &Complex::from_real(b2.clone()))?.re;
            Ok(LimitData { at, a1: aa1.clone(), a2: Real::zero(a1.prec()), b2: &bb1 + &phi, b1: bb1, slope: phi.square() - aa1 })
        }
        _ => Err(Error::InvalidInput(format!("limit_params at {at}: expected 0 or 1"))),
    }
}

fn dz_real(a1: &Real, a2: &Real, b1: &Real, b2: &Real, x: &Real) -> Real {
    1.0 - a1 / (x - b1).square() - a2 / (x - b2).square()
}

fn z_real(a1: &Real, a2: &Real, b1: &Real, b2: &Real, x: &Real) -> Real {
    x + &(a1 / (x - b1)) + &(a2 / (x - b2))
}

/// Solves the regime's augmented system for (A, B, critical points).
struct System<'a> {
    g: &'a Geometry,
    regime: Regime,
    c: Real,
}

impl System<'_> {
    fn residual(&self, x: &[Real]) -> Result<Vec<Real>> {
        let (a1, a2, b1, b2) = (&x[0], &x[1], &x[2], &x[3]);
        let g = self.g;
        let mut out = Vec::with_capacity(x.len());
        let (chis, targets): (Vec<&Real>, Vec<&Real>) = match self.regime {
            Regime::Balanced => (vec![&x[4], &x[5], &x[6], &x[7]], vec![&g.alpha1, &g.beta1, &g.alpha2, &g.beta2]),
            Regime::PushedLeft => (vec![&x[4], &x[5], &x[6]], vec![&g.alpha1, &g.alpha2, &g.beta2]),
            Regime::PushedRight => (vec![&x[4], &x[5], &x[6]], vec![&g.alpha1, &g.beta1, &g.beta2]),
        };
        for chi in &chis {
            out.push(dz_real(a1, a2, b1, b2, chi));
        }
        for (chi, e) in chis.iter().zip(&targets) {
            out.push(z_real(a1, a2, b1, b2, chi) - *e);
        }
        if self.regime != Regime::Balanced {
            let c = &self.c;
            let oc = 1.0 - c;
            out.push(a1 / c.square() + a2 / oc.square() - (b2 - b1).square());
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonConvergence("curve residual not finite".into()));
        }
        Ok(out)
    }

    fn assemble(&self, x: &[Real]) -> CurveParams {
        let (a1, a2, b1, b2) = (x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone());
        let c = self.c.clone();
        let chi_star = (1.0 - &c) * &b1 + &c * &b2;
        let zs = z_real(&a1, &a2, &b1, &b2, &chi_star);
        let g = self.g;
        let (crit, beta_c1, alpha_c2) = match self.regime {
            Regime::Balanced => ([x[4].clone(), x[5].clone(), x[6].clone(), x[7].clone()], g.beta1.clone(), g.alpha2.clone()),
            Regime::PushedLeft => ([x[4].clone(), chi_star.clone(), x[5].clone(), x[6].clone()], zs, g.alpha2.clone()),
            Regime::PushedRight => ([x[4].clone(), x[5].clone(), chi_star.clone(), x[6].clone()], g.beta1.clone(), zs),
        };
        CurveParams { c, a1, a2, b1, b2, regime: self.regime, beta_c1, alpha_c2, chi_star, crit, geometry: g.clone() }
    }

    fn unknowns(p: &CurveParams) -> Vec<Real> {
        let mut v = vec![p.a1.clone(), p.a2.clone(), p.b1.clone(), p.b2.clone()];
        match p.regime {
            Regime::Balanced => v.extend(p.crit.iter().cloned()),
            Regime::PushedLeft => v.extend([p.crit[0].clone(), p.crit[2].clone(), p.crit[3].clone()]),
            Regime::PushedRight => v.extend([p.crit[0].clone(), p.crit[1].clone(), p.crit[3].clone()]),
        }
        v
    }

    fn solve(&self, seed: &[Real], ctx: PrecisionCtx) -> Result<CurveParams> {
        let f = |x: &[Real]| self.residual(x);
        let mut x = newton_solve(f, seed, &ctx.tol(), NEWTON_ITERS, ctx)?;
        // One polishing step so the result does not depend on the seed.
        if let Ok(p) = newton_solve(f, &x, &ctx.eps(), 2, ctx) {
            x = p;
        } else if let Ok(p) = polish_once(&f, &x, ctx) {
            x = p;
        }
        Ok(self.assemble(&x))
    }
}

fn polish_once<F>(f: &F, x: &[Real], ctx: PrecisionCtx) -> Result<Vec<Real>>
where
    F: Fn(&[Real]) -> Result<Vec<Real>>,
{
    let before = crate::kernel::linalg::vec_norm_inf(&f(x)?, ctx.bits);
    let jac = crate::kernel::newton::fd_jacobian(f, x, ctx)?;
    let rhs: Vec<Real> = f(x)?.iter().map(|v| -v).collect();
    let dx = crate::kernel::solve_linear(&jac, &rhs, ctx)?;
    let y: Vec<Real> = x.iter().zip(&dx).map(|(a, d)| a + d).collect();
    let after = crate::kernel::linalg::vec_norm_inf(&f(&y)?, ctx.bits);
    if after <= before {
        Ok(y)
    } else {
        Ok(x.to_vec())
    }
}

fn check_ordering(p: &CurveParams) -> Result<()> {
    let fail = |detail: &str| Err(Error::RegimeMismatch { c: p.c.to_f64(), regime: p.regime.to_string(), detail: detail.to_string() });
    if !(p.a1 > 0.0 && p.a2 > 0.0) {
        return fail("A1, A2 must be positive");
    }
    if p.b2 <= p.b1 {
        return fail("B2 must exceed B1");
    }
    let k = &p.crit;
    if !(k[0] < p.b1 && p.b1 < k[1] && k[1] < k[2] && k[2] < p.b2 && p.b2 < k[3]) {
        return fail("critical points out of order");
    }
    Ok(())
}

/// Checks the ordering invariants of a solved parameter set.
pub fn validate_params(p: &CurveParams, ctx: PrecisionCtx) -> Result<()> {
    check_ordering(p)?;
    let slack = ctx.third();
    let fail = |detail: &str| Err(Error::RegimeMismatch { c: p.c.to_f64(), regime: p.regime.to_string(), detail: detail.to_string() });
    let g = &p.geometry;
    match p.regime {
        Regime::PushedLeft => {
            if !(p.beta_c1 < &g.beta1 + &slack && p.beta_c1 > g.alpha1) {
                return fail("beta_c1 outside (alpha1, beta1]");
            }
        }
        Regime::PushedRight => {
            if !(p.alpha_c2 > &g.alpha2 - &slack && p.alpha_c2 < g.beta2) {
                return fail("alpha_c2 outside [alpha2, beta2)");
            }
        }
        Regime::Balanced => {}
    }
    Ok(())
}

/// Per-geometry solver with write-once thresholds and continuation caches.
pub struct CurveSolver {
    pub geometry: Geometry,
    pub ctx: PrecisionCtx,
    thresholds: OnceLock<(Real, Real)>,
    balanced: OnceLock<CurveParams>,
    left: Mutex<Vec<CurveParams>>,
    right: Mutex<Vec<CurveParams>>,
}

impl CurveSolver {
    pub fn new(geometry: Geometry, ctx: PrecisionCtx) -> Self {
        CurveSolver {
            geometry,
            ctx,
            thresholds: OnceLock::new(),
            balanced: OnceLock::new(),
            left: Mutex::new(Vec::new()),
            right: Mutex::new(Vec::new()),
        }
    }

    fn limit_seed(&self, regime: Regime, c: &Real) -> Result<CurveParams> {
        let ctx = self.ctx;
        match regime {
            Regime::PushedLeft => {
                let lim = limit_params(&self.geometry, 0)?;
                let a1 = c.square() * &lim.slope;
                let d = (&a1 / (1.0 - &lim.a2 / (&lim.b1 - &lim.b2).square())).sqrt();
                let s = lim.a2.sqrt();
                let x1 = &lim.b1 - &d;
                let x2 = &lim.b1 + &d;
                let x3 = &lim.b2 - &s;
                let x4 = &lim.b2 + &s;
                Ok(self.raw(regime, c, a1, lim.a2.clone(), lim.b1.clone(), lim.b2.clone(), [x1, x2, x3, x4]))
            }
            Regime::PushedRight => {
                let lim = limit_params(&self.geometry, 1)?;
                let oc = ctx.one() - c;
                let a2 = oc.square() * &lim.slope;
                let d = (&a2 / (1.0 - &lim.a1 / (&lim.b1 - &lim.b2).square())).sqrt();
                let s = lim.a1.sqrt();
                let x1 = &lim.b1 - &s;
                let x2 = &lim.b1 + &s;
                let x3 = &lim.b2 - &d;
                let x4 = &lim.b2 + &d;
                Ok(self.raw(regime, c, lim.a1.clone(), a2, lim.b1.clone(), lim.b2.clone(), [x1, x2, x3, x4]))
            }
            Regime::Balanced => Err(Error::InvalidInput("balanced regime has no limit seed".into())),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn raw(&self, regime: Regime, c: &Real, a1: Real, a2: Real, b1: Real, b2: Real, crit: [Real; 4]) -> CurveParams {
        CurveParams {
            c: c.clone(),
            a1,
            a2,
            b1,
            b2,
            regime,
            beta_c1: self.geometry.beta1.clone(),
            alpha_c2: self.geometry.alpha2.clone(),
            chi_star: c.clone(),
            crit,
            geometry: self.geometry.clone(),
        }
    }

    fn system(&self, regime: Regime, c: &Real) -> System<'_> {
        System { g: &self.geometry, regime, c: c.clone() }
    }

    /// Seed at `target` from a solution at `cur.c`, rescaling the vanishing
    /// parameter and the critical point that collapses onto its pole.
    fn predict(&self, regime: Regime, cur: &CurveParams, target: &Real) -> Vec<Real> {
        let mut x = System::unknowns(cur);
        if regime == Regime::PushedLeft {
            let r = target / &cur.c;
            x[0] = &x[0] * r.square();
            x[4] = &cur.b1 - (&cur.b1 - &x[4]) * &r;
        } else {
            let r = (1.0 - target) / (1.0 - &cur.c);
            x[1] = &x[1] * r.square();
            x[6] = &cur.b2 + (&x[6] - &cur.b2) * &r;
        }
        x
    }

    /// Continuation in c within a pushed regime, unchecked against thresholds.
    pub fn solve_pushed(&self, regime: Regime, c: &Real) -> Result<CurveParams> {
        let ctx = self.ctx;
        let cache = if regime == Regime::PushedLeft { &self.left } else { &self.right };
        let start = {
            let cached = cache.lock().expect("curve cache");
            cached.iter().min_by(|p, q| (&p.c - c).abs().total_cmp(&(&q.c - c).abs())).cloned()
        };
        let anchor = if regime == Regime::PushedLeft { ctx.real(C0) } else { ctx.real(1.0 - C0) };
        let mut cur = match start {
            Some(p) if (&p.c - c).abs() < (&anchor - c).abs() => p,
            _ => {
                let near_edge = if regime == Regime::PushedLeft { *c < C0 } else { *c > 1.0 - C0 };
                let c_start = if near_edge { c.clone() } else { anchor };
                let seed = self.limit_seed(regime, &c_start)?;
                self.system(regime, &c_start).solve(&System::unknowns(&seed), ctx)?
            }
        };
        let mut step = ctx.real(STEP);
        while (&cur.c - c).abs() > ctx.eps() {
            let dist = c - &cur.c;
            // A1 (or A2) vanishes quadratically at the edge: keep steps relative.
            let edge = if regime == Regime::PushedLeft { cur.c.clone() } else { 1.0 - &cur.c };
            let cap = step.clone().min(edge * 0.5);
            let h = if dist.abs() <= cap { dist.clone() } else { cap * dist.signum() };
            let target = &cur.c + &h;
            let seed = self.predict(regime, &cur, &target);
            let solved = self.system(regime, &target).solve(&seed, ctx).and_then(|p| check_ordering(&p).map(|_| p));
            match solved {
                Ok(p) => {
                    cur = p;
                    step = (step * 2.0).min(ctx.real(STEP));
                }
                Err(e) => {
                    step *= 0.5;
                    if step < STEP_FLOOR {
                        return Err(e);
                    }
                }
            }
        }
        cur.c = c.clone();
        let mut cached = cache.lock().expect("curve cache");
        if !cached.iter().any(|p| p.c == cur.c) {
            cached.push(cur.clone());
        }
        Ok(cur)
    }

    /// (c*, c**), computed once.
    pub fn thresholds(&self) -> Result<(Real, Real)> {
        if let Some(t) = self.thresholds.get() {
            return Ok(t.clone());
        }
        let cs = self.threshold(Regime::PushedLeft)?;
        let css = self.threshold(Regime::PushedRight)?;
        if cs >= css {
            return Err(Error::InvalidGeometry(format!("thresholds out of order: c* = {} ≥ c** = {}", cs.to_sci(10), css.to_sci(10))));
        }
        let _ = self.thresholds.set((cs, css));
        Ok(self.thresholds.get().expect("set").clone())
    }

    /// Root of β_{c,1} − β1 (or α_{c,2} − α2) by marching, then Illinois
    /// regula falsi on the bracket.
    fn threshold(&self, regime: Regime) -> Result<Real> {
        let ctx = self.ctx;
        let left = regime == Regime::PushedLeft;
        let f = |p: &CurveParams| {
            if left {
                &p.beta_c1 - &self.geometry.beta1
            } else {
                &self.geometry.alpha2 - &p.alpha_c2
            }
        };
        let dir = if left { 1.0 } else { -1.0 };
        let mut c = if left { ctx.real(C0) } else { ctx.real(1.0 - C0) };
        let mut lo = self.solve_pushed(regime, &c)?;
        let mut f_lo = f(&lo);
        if f_lo >= 0.0 {
            return Err(Error::NonConvergence("threshold bracket: pushed regime empty at the continuation floor".into()));
        }
        let (mut hi, mut f_hi);
        loop {
            c = &c + STEP * dir;
            if c <= 0.0 || c >= 1.0 {
                return Err(Error::NonConvergence("threshold not bracketed in (0,1)".into()));
            }
            let p = self.solve_pushed(regime, &c)?;
            let v = f(&p);
            if v >= 0.0 {
                hi = p;
                f_hi = v;
                break;
            }
            lo = p;
            f_lo = v;
        }
        let tol = ctx.tol();
        let mut side = 0i32;
        for _ in 0..200 {
            let cn = (&lo.c * &f_hi - &hi.c * &f_lo) / (&f_hi - &f_lo);
            let p = self.solve_pushed(regime, &cn)?;
            let v = f(&p);
            if v.abs() <= tol || (&hi.c - &lo.c).abs() <= tol {
                return Ok(cn);
            }
            if v < 0.0 {
                lo = p;
                f_lo = v;
                if side == -1 {
                    f_hi *= 0.5;
                }
                side = -1;
            } else {
                hi = p;
                f_hi = v;
                if side == 1 {
                    f_lo *= 0.5;
                }
                side = 1;
            }
        }
        Err(Error::NonConvergence("threshold regula falsi".into()))
    }

    fn balanced(&self) -> Result<CurveParams> {
        if let Some(p) = self.balanced.get() {
            return Ok(p.clone());
        }
        let (cs, _) = self.thresholds()?;
        let seed = self.solve_pushed(Regime::PushedLeft, &cs)?;
        let mut x = vec![seed.a1.clone(), seed.a2.clone(), seed.b1.clone(), seed.b2.clone()];
        x.extend(seed.crit.iter().cloned());
        let p = self.system(Regime::Balanced, &cs).solve(&x, self.ctx)?;
        let _ = self.balanced.set(p);
        Ok(self.balanced.get().expect("set").clone())
    }

    pub fn regime_of(&self, c: &Real) -> Result<Regime> {
        let (cs, css) = self.thresholds()?;
        Ok(if *c < cs {
            Regime::PushedLeft
        } else if *c > css {
            Regime::PushedRight
        } else {
            Regime::Balanced
        })
    }

    pub fn solve(&self, c: &Real) -> Result<CurveParams> {
        if !(*c > 0.0 && *c < 1.0) {
            return Err(Error::DomainViolation(format!("c = {} outside (0,1)", c.to_sci(10))));
        }
        let p = match self.regime_of(c)? {
            Regime::Balanced => {
                let mut p = self.balanced()?;
                p.c = c.clone();
                p.chi_star = (1.0 - c) * &p.b1 + c * &p.b2;
                p
            }
            r => self.solve_pushed(r, c)?,
        };
        validate_params(&p, self.ctx)?;
        Ok(p)
    }
}

/// Convenience wrapper constructing a fresh solver.
pub fn solve_params(geometry: &Geometry, c: &Real, ctx: PrecisionCtx) -> Result<CurveParams> {
    CurveSolver::new(geometry.clone(), ctx).solve(c)
}

pub fn find_thresholds(geometry: &Geometry, ctx: PrecisionCtx) -> Result<(Real, Real)> {
    CurveSolver::new(geometry.clone(), ctx).thresholds()
}

/// Roots of (χ−B1)²(χ−B2)² − A1(χ−B2)² − A2(χ−B1)², sorted by real part.
pub fn critical_points(p: &CurveParams, ctx: PrecisionCtx) -> Result<[Complex; 4]> {
    let lin = |b: &Real| Poly::from_real(&[-b, ctx.one()], ctx);
    let q1 = lin(&p.b1).mul(&lin(&p.b1));
    let q2 = lin(&p.b2).mul(&lin(&p.b2));
    let quartic = q1.mul(&q2).sub(&q2.scale(&Complex::from_real(p.a1.clone()))).sub(&q1.scale(&Complex::from_real(p.a2.clone())));
    let dq = quartic.derivative();
    let mut roots = poly_roots(&quartic)?;
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let d = dq.eval(r);
            if d.abs().is_zero() {
                break;
            }
            *r = &*r - &(quartic.eval(r) / d);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    let limit = ctx.third();
    for r in &roots {
        if r.im.abs() > limit {
            return Err(Error::ComplexCritical(r.im.to_f64()));
        }
    }
    Ok([roots[0].clone(), roots[1].clone(), roots[2].clone(), roots[3].clone()])
}

/// (χ*, z(χ*)).
pub fn special_point(p: &CurveParams, c: &Real) -> (Real, Real) {
    let chi = (1.0 - c) * &p.b1 + c * &p.b2;
    let z = p.z_real(&chi);
    (chi, z)
}

/// Smallest positive root r of the polar equation of the curve g = 1 around
/// B_i along direction φ, with dr/dφ.
pub fn contour_radius(p: &CurveParams, i: usize, cos: &Real, sin: &Real) -> Result<(Real, Real)> {
    let j = 3 - i;
    let (ai, aj) = (p.a(i), p.a(j));
    let d = p.b(i) - p.b(j);
    let (ai_f, aj_f, d_f, cf) = (ai.to_f64(), aj.to_f64(), d.to_f64(), cos.to_f64());
    let g = |r: f64| ai_f / (r * r) + aj_f / (d_f * d_f + 2.0 * d_f * r * cf + r * r) - 1.0;
    let mut lo = 0.5 * ai_f.sqrt();
    let mut hi = lo;
    let mut found = false;
    for _ in 0..2000 {
        hi = lo * 1.02;
        if g(hi) < 0.0 {
            found = true;
            break;
        }
        lo = hi;
    }
    if !found {
        return Err(Error::NonConvergence("contour radius bracket".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 * hi {
            break;
        }
    }
    let prec = p.prec();
    let two_d_cos = &d * cos * 2.0;
    let k2 = d.square() - ai - aj;
    let k1 = ai * &d * cos * -2.0;
    let k0 = -(ai * d.square());
    let eps = Real::pow2(-(prec as i32) + 8, prec);
    let mut r = Real::from_f64(0.5 * (lo + hi), prec);
    for _ in 0..20 {
        let r2 = r.square();
        let val = &r2 * &r2 + &two_d_cos * &r2 * &r + &k2 * &r2 + &k1 * &r + &k0;
        let der = &r2 * &r * 4.0 + &two_d_cos * &r2 * 3.0 + &k2 * &r * 2.0 + &k1;
        let step = val / der;
        r -= &step;
        if step.abs() <= &eps * &r {
            break;
        }
    }
    let r2 = r.square();
    let g_r = &r2 * &r * 4.0 + &two_d_cos * &r2 * 3.0 + &k2 * &r * 2.0 + &k1;
    let g_phi = &d * &r * sin * (&r2 - ai) * -2.0;
    let dr = -(g_phi / g_r);
    Ok((r, dr))
}

/// Whether χ lies strictly inside the curve g = 1 around B_i.
pub fn inside_curve(p: &CurveParams, i: usize, chi: &Complex) -> Result<bool> {
    let v = chi - p.b(i);
    let rho = v.abs();
    if rho.is_zero() {
        return Ok(true);
    }
    let cos = &v.re / &rho;
    let sin = &v.im / &rho;
    let (r, _) = contour_radius(p, i, &cos, &sin)?;
    Ok(rho < r)
}

fn cubic(p: &CurveParams, z: &Complex, ctx: PrecisionCtx) -> Poly {
    let s1 = &p.b1 + &p.b2;
    let pr = &p.b1 * &p.b2;
    let c3 = ctx.cone();
    let c2 = -(z + &s1);
    let c1 = (z * &s1) + &(&pr + &p.a1 + &p.a2);
    let c0 = -((z * &pr) + &(&p.a1 * &p.b2 + &p.a2 * &p.b1));
    Poly::new(vec![c0, c1, c2, c3], ctx)
}

/// Which cut Δ_{c,i} (1 or 2) contains the real point, if any.
pub fn cut_index(p: &CurveParams, z: &Complex) -> Option<usize> {
    if !z.im.is_zero() {
        return None;
    }
    for i in [1, 2] {
        let (a, b) = p.support(i);
        if a < z.re && z.re < b {
            return Some(i);
        }
    }
    None
}

/// The three preimages (χ⁽⁰⁾, χ⁽¹⁾, χ⁽²⁾) of z.
pub fn sheet_values(p: &CurveParams, z: &Complex, side: Side, ctx: PrecisionCtx) -> Result<[Complex; 3]> {
    let cub = cubic(p, z, ctx);
    let dcub = cub.derivative();
    let mut roots = poly_roots(&cub)?;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = dcub.eval(r);
            if d.abs().is_zero() {
                break;
            }
            let step = cub.eval(r) / d;
            *r = &*r - &step;
        }
    }
    let close = ctx.third() * (z.abs() + 1.0);
    for a in 0..3 {
        for b in a + 1..3 {
            if (&roots[a] - &roots[b]).abs() <= close {
                return Err(Error::ClassificationAmbiguous(format!("{z:.10}")));
            }
        }
    }
    if let Some(i) = cut_index(p, z) {
        if side == Side::Off {
            let (a, b) = p.support(i);
            return Err(Error::OnCut { a: a.to_f64(), b: b.to_f64() });
        }
        roots.sort_by(|u, v| u.im.total_cmp(&v.im));
        let (neg, real, pos) = (roots[0].clone(), roots[1].clone(), roots[2].clone());
        let (s0, si) = if side == Side::Plus { (pos, neg) } else { (neg, pos) };
        return Ok(if i == 1 { [s0, si, real] } else { [s0, real, si] });
    }
    let gs: Vec<Real> = roots.iter().map(|r| p.g_of(r)).collect();
    let k0 = (0..3).min_by(|&a, &b| gs[a].total_cmp(&gs[b])).expect("three roots");
    let rest: Vec<usize> = (0..3).filter(|&k| k != k0).collect();
    let in1: Vec<bool> = rest.iter().map(|&k| inside_curve(p, 1, &roots[k])).collect::<Result<_>>()?;
    let (k1, k2) = match (in1[0], in1[1]) {
        (true, false) => (rest[0], rest[1]),
        (false, true) => (rest[1], rest[0]),
        _ => {
            let in2: Vec<bool> = rest.iter().map(|&k| inside_curve(p, 2, &roots[k])).collect::<Result<_>>()?;
            match (in2[0], in2[1]) {
                (true, false) => (rest[1], rest[0]),
                (false, true) => (rest[0], rest[1]),
                _ => return Err(Error::ClassificationAmbiguous(format!("{z:.10}"))),
            }
        }
    };
    Ok([roots[k0].clone(), roots[k1].clone(), roots[k2].clone()])
}

/// Π⁽ᵏ⁾(z) = 1/z′(χ⁽ᵏ⁾(z)).
pub fn pi_value(p: &CurveParams, sheet: usize, z: &Complex, side: Side, ctx: PrecisionCtx) -> Result<Complex> {
    let chis = sheet_values(p, z, side, ctx)?;
    Ok(p.dz_of(&chis[sheet]).recip())
}

/// Gauss–Legendre nodes mapped to [a, b] (shared helper for sampling grids).
pub fn mapped_nodes(rule: &QuadratureRule, a: &Real, b: &Real) -> Vec<Real> {
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    rule.nodes.iter().map(|t| &mid + &(&half * t)).collect()
}
