//! Classical and surface Szegő functions.
//!
//! The surface function is evaluated in the global coordinate χ: the cycles
//! over the cuts become the closed curves A1/|χ−B1|² + A2/|χ−B2|² = 1, and the
//! third-kind differential with poles u (residue 2) and u′, u″ (residue −1)
//! is 2/(s−u) − 1/(s−u′) − 1/(s−u″) ds.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::curve::{contour_radius, cut_index, sheet_values, w_map, CurveParams, Side};
use crate::error::{Error, Result};
use crate::kernel::{integrate_endpoint_singular, tanh_sinh};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};
use crate::weight::WeightSpec;

const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 13;

/// Relative tolerance of the Szegő quadratures, 2^(−bits/4).
pub fn szego_tol(ctx: PrecisionCtx) -> Real {
    Real::pow2(-(ctx.bits as i32) / 4, ctx.bits)
}

/// L(x) = log(ρ w₊)(x) on the open interval (a, b), from the distances to the
/// endpoints so that the logarithmic singularities keep full accuracy.
fn log_rho_w(weight: &WeightSpec, x: &Real, da: &Real, db: &Real) -> Complex {
    let prec = x.prec();
    let mut l = weight.log_rho(x);
    l.re += (da * db).ln() * 0.5;
    l.im += Real::pi(prec) * 0.5;
    l
}

fn check_off_interval(a: &Real, b: &Real, z: &Complex, side: Side) -> Result<()> {
    if z.im.is_zero() && *a <= z.re && z.re <= *b {
        let interior = *a < z.re && z.re < *b;
        if !interior || side == Side::Off {
            return Err(Error::OnCut { a: a.to_f64(), b: b.to_f64() });
        }
    }
    Ok(())
}

/// S_ρ(z) = exp{ (w(z)/2πi) ∫ log(ρ w₊)(x)/(z−x) dx/w₊(x) } on C \ [a, b],
/// with boundary values on the open interval selected by `side`.
pub fn classical_szego(weight: &WeightSpec, z: &Complex, side: Side, ctx: PrecisionCtx) -> Result<Complex> {
    let (a, b) = weight.interval.clone();
    check_off_interval(&a, &b, z, side)?;
    let tol = szego_tol(ctx);
    let two_pi_i = Complex::new(ctx.zero(), ctx.pi() * 2.0);
    // g(x) = L(x)/w₊(x) with w₊ = i√((x−a)(b−x)).
    let g = |x: &Real, da: &Real, db: &Real| -> Complex {
        let l = log_rho_w(weight, x, da, db);
        let root = (da * db).sqrt();
        Complex::new(l.im / &root, -(l.re / &root))
    };
    let on_cut = z.im.is_zero() && a < z.re && z.re < b;
    // C(z) = (1/2πi) ∫ g(x)/(x − z) dx; the exponent is −w(z)·C(z).
    let c = if on_cut {
        let x0 = z.re.clone();
        let g0 = g(&x0, &(&x0 - &a), &(&b - &x0));
        // Near x0 the difference quotient is replaced by a centred derivative.
        let h = ctx.third();
        let (xm, xp) = (&x0 - &h, &x0 + &h);
        let dg = (g(&xp, &(&xp - &a), &(&b - &xp)) - g(&xm, &(&xm - &a), &(&b - &xm))) / Complex::from_real(&h * 2.0);
        let f = |x: &Real, da: &Real, db: &Real| {
            let d = x - &x0;
            if d.clone().abs() < h {
                return Ok(dg.clone());
            }
            Ok((g(x, da, db) - &g0) / Complex::from_real(d))
        };
        let pv = integrate_endpoint_singular(f, &a, &b, ctx, &tol)? + g0.clone() * Complex::from_real(((&b - &x0) / (&x0 - &a)).ln());
        let half = g0 * 0.5;
        let jump = if side == Side::Plus { half } else { -half };
        pv / two_pi_i + jump
    } else {
        let f = |x: &Real, da: &Real, db: &Real| Ok(g(x, da, db) / (Complex::from_real(x.clone()) - z));
        integrate_endpoint_singular(f, &a, &b, ctx, &tol)? / two_pi_i
    };
    let w = w_map(&a, &b, z, side);
    Ok((-(w * c)).exp())
}

/// S_ρ(∞) = exp{ (1/2πi) ∫ log(ρ w₊)(x) dx/w₊(x) }.
pub fn classical_szego_infinity(weight: &WeightSpec, ctx: PrecisionCtx) -> Result<Complex> {
    let (a, b) = weight.interval.clone();
    let tol = szego_tol(ctx);
    let f = |x: &Real, da: &Real, db: &Real| {
        let l = log_rho_w(weight, x, da, db);
        let root = (da * db).sqrt();
        Ok(Complex::new(l.im / &root, -(l.re / &root)))
    };
    let two_pi_i = Complex::new(ctx.zero(), ctx.pi() * 2.0);
    Ok((integrate_endpoint_singular(f, &a, &b, ctx, &tol)? / two_pi_i).exp())
}

/// Quadrature samples of one contour at one tanh-sinh level: nodes s_k,
/// weights dw_k (including ds), and L at the projected point.
#[derive(Debug)]
struct ContourSamples {
    s: Vec<Complex>,
    dw: Vec<Complex>,
    l: Vec<Complex>,
}

/// A pole of the Cauchy kernel.
#[derive(Clone, Debug)]
enum KernelPoint {
    Finite(Complex),
    /// A point on contour `curve`, approached from inside (sheet `curve`) or
    /// outside (sheet 0), whose projection is the real point `x`.
    OnContour {
        u: Complex,
        curve: usize,
        inside: bool,
        x: Real,
    },
}

pub struct SzegoCache {
    pub params: CurveParams,
    pub weights: (WeightSpec, WeightSpec),
    /// S⁽⁰⁾(∞), S⁽¹⁾(∞), S⁽²⁾(∞).
    pub s_inf: [Complex; 3],
    pub ctx: PrecisionCtx,
    samples: Mutex<HashMap<(usize, u32), Arc<ContourSamples>>>,
}

impl std::fmt::Debug for SzegoCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SzegoCache").field("c", &self.params.c).field("s_inf", &self.s_inf).finish()
    }
}

impl SzegoCache {
    pub fn new(params: CurveParams, weights: (WeightSpec, WeightSpec), ctx: PrecisionCtx) -> Result<Self> {
        for (i, w) in [(1, &weights.0), (2, &weights.1)] {
            let (a, b) = params.support(i);
            if !(w.interval.0 <= a && b <= w.interval.1) {
                return Err(Error::InvalidInput(format!("weight {i} interval does not contain the support")));
            }
        }
        let mut cache =
            SzegoCache { params, weights, s_inf: [ctx.cone(), ctx.cone(), ctx.cone()], ctx, samples: Mutex::new(HashMap::new()) };
        let b1 = KernelPoint::Finite(Complex::from_real(cache.params.b1.clone()));
        let b2 = KernelPoint::Finite(Complex::from_real(cache.params.b2.clone()));
        let s0 = cache.evaluate(&[(-1.0, b1.clone()), (-1.0, b2.clone())])?;
        let s1 = cache.evaluate(&[(2.0, b1.clone()), (-1.0, b2.clone())])?;
        let s2 = cache.evaluate(&[(2.0, b2), (-1.0, b1)])?;
        cache.s_inf = [s0, s1, s2];
        Ok(cache)
    }

    fn weight(&self, i: usize) -> &WeightSpec {
        if i == 1 {
            &self.weights.0
        } else {
            &self.weights.1
        }
    }

    /// L_i at a real point of Δ_{c,i}.
    fn l_at(&self, i: usize, x: &Real) -> Complex {
        let (a, b) = self.params.support(i);
        log_rho_w(self.weight(i), x, &(x - &a), &(&b - x))
    }

    fn samples(&self, curve: usize, level: u32) -> Result<Arc<ContourSamples>> {
        if let Some(s) = self.samples.lock().expect("sample cache").get(&(curve, level)) {
            return Ok(s.clone());
        }
        let built = Arc::new(self.build_samples(curve, level)?);
        self.samples.lock().expect("sample cache").insert((curve, level), built.clone());
        Ok(built)
    }

    /// Tanh-sinh samples on the two arcs φ ∈ [0, π] and [π, 2π] of the polar
    /// parametrisation s = B_i + r(φ)e^{iφ}; the arcs end at the preimages of
    /// the endpoints of Δ_{c,i}, where L has logarithmic singularities.
    fn build_samples(&self, curve: usize, level: u32) -> Result<ContourSamples> {
        let ctx = self.ctx;
        let p = &self.params;
        let rule = tanh_sinh(level, ctx);
        let pi = ctx.pi();
        let half = &pi * 0.5;
        let resolvable = Real::pow2(-(3 * ctx.bits as i32) / 4, ctx.bits);
        let (t_lo, t_hi) = if curve == 1 { (&p.crit[0], &p.crit[1]) } else { (&p.crit[2], &p.crit[3]) };
        let (sup_a, sup_b) = p.support(curve);
        let weight = self.weight(curve);
        // |z(s) − z(t)| for a critical point t, free of cancellation.
        let dist = |s: &Complex, t: &Real| -> Real {
            let st = s - t;
            let k1 = Complex::from_real(&p.a1 / (t - &p.b1).square()) / (s - &p.b1);
            let k2 = Complex::from_real(&p.a2 / (t - &p.b2).square()) / (s - &p.b2);
            ((&st * &st) * (k1 + k2)).abs()
        };
        let mut out = ContourSamples { s: Vec::new(), dw: Vec::new(), l: Vec::new() };
        for panel in 0..2 {
            let mid = &half * (2 * panel + 1) as f64;
            for ((x, g), w) in rule.nodes.iter().zip(&rule.gaps).zip(&rule.weights) {
                if *g < resolvable {
                    continue;
                }
                let phi = &mid + &(&half * x);
                let (cos, sin) = (phi.cos(), phi.sin());
                let (r, dr) = contour_radius(p, curve, &cos, &sin)?;
                let e = Complex::new(cos, sin);
                let s = Complex::from_real(p.b(curve).clone()) + e.scale(&r);
                let ds = Complex::new(dr, r) * &e;
                let xr = p.z_of(&s).re;
                let xr = xr.max(sup_a.clone()).min(sup_b.clone());
                let mut l = weight.log_rho(&xr);
                l.re += (dist(&s, t_lo) * dist(&s, t_hi)).ln() * 0.5;
                l.im += &pi * 0.5;
                out.dw.push(ds * &(w * &half));
                out.s.push(s);
                out.l.push(l);
            }
        }
        Ok(out)
    }

    /// ∮_{Γ_curve} L(s)/(s − u) ds at one level.
    fn cauchy(&self, curve: usize, level: u32, point: &KernelPoint) -> Result<Complex> {
        let smp = self.samples(curve, level)?;
        let ctx = self.ctx;
        let mut acc = ctx.czero();
        match point {
            KernelPoint::OnContour { u, curve: on, inside, x } if *on == curve => {
                let lu = self.l_at(curve, x);
                for k in 0..smp.s.len() {
                    acc += (&smp.l[k] - &lu) * &smp.dw[k] / (&smp.s[k] - u);
                }
                if *inside {
                    acc += lu * Complex::new(ctx.zero(), ctx.pi() * 2.0);
                }
            }
            KernelPoint::Finite(u) | KernelPoint::OnContour { u, .. } => {
                for k in 0..smp.s.len() {
                    acc += &smp.l[k] * &smp.dw[k] / (&smp.s[k] - u);
                }
            }
        }
        Ok(acc)
    }

    /// exp{ (1/6πi) Σ_i ∮_{Γ_i} L_i Σ_j coef_j/(s − u_j) ds }, refining the
    /// tanh-sinh level until the exponent is stable.
    fn evaluate(&self, terms: &[(f64, KernelPoint)]) -> Result<Complex> {
        let ctx = self.ctx;
        let tol = szego_tol(ctx);
        let six_pi_i = Complex::new(ctx.zero(), ctx.pi() * 6.0);
        let mut prev: Option<Complex> = None;
        for level in MIN_LEVEL..=MAX_LEVEL {
            let mut e = ctx.czero();
            for curve in [1, 2] {
                for (coef, pt) in terms {
                    e += self.cauchy(curve, level, pt)? * *coef;
                }
            }
            let e = e / &six_pi_i;
            if let Some(p) = &prev {
                if (&e - p).abs() <= &tol * (e.abs() + 1.0) {
                    return Ok(e.exp());
                }
            }
            prev = Some(e);
        }
        Err(Error::NonConvergence("surface Szegő quadrature".into()))
    }
}

fn too_close_to_branch_point(p: &CurveParams, z: &Complex) -> Result<()> {
    for (i, e) in p.branch_points().iter().enumerate() {
        let (a, b) = p.support(if i < 2 { 1 } else { 2 });
        let limit = (b - a) * 1e-6;
        if (z - e).abs() < limit {
            return Err(Error::TooCloseToBranchPoint(e.to_f64()));
        }
    }
    Ok(())
}

/// S_c on `sheet` over the base point z (boundary value by `side` on a cut).
pub fn surface_szego(cache: &SzegoCache, sheet: usize, z: &Complex, side: Side) -> Result<Complex> {
    let p = &cache.params;
    let ctx = cache.ctx;
    too_close_to_branch_point(p, z)?;
    let chis = sheet_values(p, z, side, ctx)?;
    let cut = cut_index(p, z);
    let point = |k: usize| match cut {
        Some(i) if k == 0 || k == i => KernelPoint::OnContour { u: chis[k].clone(), curve: i, inside: k == i, x: z.re.clone() },
        _ => KernelPoint::Finite(chis[k].clone()),
    };
    let mut terms = vec![(2.0, point(sheet))];
    for k in (0..3).filter(|&k| k != sheet) {
        terms.push((-1.0, point(k)));
    }
    cache.evaluate(&terms)
}

/// (ρ_i w_{c,i+})(x) for x in the open support Δ_{c,i}.
pub fn jump_factor(cache: &SzegoCache, i: usize, x: &Real) -> Result<Complex> {
    let (a, b) = cache.params.support(i);
    if !(a < *x && *x < b) {
        return Err(Error::OutsideSupport { x: x.to_f64(), a: a.to_f64(), b: b.to_f64() });
    }
    Ok(cache.l_at(i, x).exp())
}

#[derive(Clone, Debug)]
pub struct SzegoInfinity {
    pub s: [Complex; 3],
    /// s_{n,i} = S⁽⁰⁾(∞)/S⁽ⁱ⁾(∞).
    pub s_n1: Complex,
    pub s_n2: Complex,
}

pub fn szego_infinity(cache: &SzegoCache) -> SzegoInfinity {
    let s = cache.s_inf.clone();
    let s_n1 = &s[0] / &s[1];
    let s_n2 = &s[0] / &s[2];
    SzegoInfinity { s, s_n1, s_n2 }
}
