use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};

pub const NODE_CAP: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

/// Tanh-sinh rule on (−1, 1). `gaps[k] = 1 − |nodes[k]|` is stored separately
/// so that integrands can resolve endpoint singularities without cancellation.
#[derive(Clone, Debug)]
pub struct TanhSinhRule {
    pub nodes: Vec<Real>,
    pub gaps: Vec<Real>,
    pub weights: Vec<Real>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    None,
    /// x = m + r·cos θ, θ ∈ [0, π]; absorbs inverse-square-root endpoints.
    Chebyshev,
}

type RuleCache<T> = Mutex<HashMap<(usize, u32), Arc<T>>>;

fn gl_cache() -> &'static RuleCache<QuadratureRule> {
    static CACHE: OnceLock<RuleCache<QuadratureRule>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn ts_cache() -> &'static RuleCache<TanhSinhRule> {
    static CACHE: OnceLock<RuleCache<TanhSinhRule>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Returns (P_n(x), P_n'(x)) from the three-term recurrence.
fn legendre(n: usize, x: &Real) -> (Real, Real) {
    let prec = x.prec();
    let mut p0 = Real::one(prec);
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = k as f64;
        let p2 = (x * &p1 * (2.0 * kf - 1.0) - &p0 * (kf - 1.0)) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = (x * &p1 - &p0) * (n as f64) / (x.square() - 1.0);
    (p1, dp)
}

fn legendre_f64(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

fn build_gauss_legendre(n: usize, ctx: PrecisionCtx) -> QuadratureRule {
    let prec = ctx.bits;
    let mut nodes = vec![Real::zero(prec); n];
    let mut weights = vec![Real::zero(prec); n];
    if n == 1 {
        weights[0] = ctx.int(2);
        return QuadratureRule { nodes, weights };
    }
    let tol = ctx.eps();
    for i in 0..n.div_ceil(2) {
        let mut g = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_f64(n, g);
            let step = p / dp;
            g -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let mut x = ctx.real(g);
        let mut dp = ctx.one();
        for _ in 0..64 {
            let (p, d) = legendre(n, &x);
            let step = &p / &d;
            x -= &step;
            dp = d;
            if step.abs() <= tol {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x.square()) * dp.square());
        nodes[n - 1 - i] = x.clone();
        weights[n - 1 - i] = w.clone();
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = ctx.zero();
    }
    QuadratureRule { nodes, weights }
}

/// n-point Gauss–Legendre rule on [−1, 1], memoised per (n, bits).
pub fn gauss_legendre(n: usize, ctx: PrecisionCtx) -> Arc<QuadratureRule> {
    assert!(n >= 1, "gauss_legendre needs n ≥ 1");
    let key = (n, ctx.bits);
    if let Some(r) = gl_cache().lock().expect("rule cache").get(&key) {
        return r.clone();
    }
    let rule = Arc::new(build_gauss_legendre(n, ctx));
    gl_cache().lock().expect("rule cache").insert(key, rule.clone());
    rule
}

fn build_tanh_sinh(level: u32, ctx: PrecisionCtx) -> TanhSinhRule {
    let prec = ctx.bits;
    let h = Real::pow2(-(level as i32), prec);
    let half_pi = ctx.pi() * 0.5;
    let floor = Real::pow2(-2 * ctx.bits as i32, prec);
    let mut pos: Vec<(Real, Real, Real)> = Vec::new();
    let mut k: i64 = 0;
    loop {
        let t = &h * (k as f64);
        let u = &half_pi * t.sinh();
        let cu = u.cosh();
        let gap = (-&u).exp() / &cu;
        if gap < floor {
            break;
        }
        let x = u.tanh();
        let w = &h * &half_pi * t.cosh() / cu.square();
        pos.push((x, gap, w));
        k += 1;
    }
    let mut nodes = Vec::with_capacity(2 * pos.len());
    let mut gaps = Vec::with_capacity(2 * pos.len());
    let mut weights = Vec::with_capacity(2 * pos.len());
    for (x, g, w) in pos.iter().skip(1).rev() {
        nodes.push(-x);
        gaps.push(g.clone());
        weights.push(w.clone());
    }
    for (x, g, w) in pos {
        nodes.push(x);
        gaps.push(g);
        weights.push(w);
    }
    TanhSinhRule { nodes, gaps, weights }
}

/// Tanh-sinh rule with step 2^(−level), memoised per (level, bits).
pub fn tanh_sinh(level: u32, ctx: PrecisionCtx) -> Arc<TanhSinhRule> {
    let key = (level as usize, ctx.bits);
    if let Some(r) = ts_cache().lock().expect("rule cache").get(&key) {
        return r.clone();
    }
    let rule = Arc::new(build_tanh_sinh(level, ctx));
    ts_cache().lock().expect("rule cache").insert(key, rule.clone());
    rule
}

fn converged(new: &Complex, old: &Complex, scale: &Real, tol: &Real) -> bool {
    (new - old).abs() <= tol * scale
}

/// Integral of `f` over [a, b], Gauss–Legendre with node doubling.
pub fn integrate_interval<F>(f: F, a: &Real, b: &Real, ctx: PrecisionCtx, sub: Substitution) -> Result<Complex>
where
    F: Fn(&Real) -> Result<Complex>,
{
    integrate_interval_tol(f, a, b, ctx, sub, &ctx.tol(), 16).map(|(v, _)| v)
}

/// As [`integrate_interval`] with explicit relative tolerance and starting
/// node count. Returns the value and the node count that certified it.
pub fn integrate_interval_tol<F>(
    f: F,
    a: &Real,
    b: &Real,
    ctx: PrecisionCtx,
    sub: Substitution,
    tol: &Real,
    n0: usize,
) -> Result<(Complex, usize)>
where
    F: Fn(&Real) -> Result<Complex>,
{
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    let half_pi = ctx.pi() * 0.5;
    let mut prev: Option<Complex> = None;
    let mut n = n0.max(1);
    while n <= NODE_CAP {
        let rule = gauss_legendre(n, ctx);
        let mut sum = ctx.czero();
        let mut l1 = ctx.zero();
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let term = match sub {
                Substitution::None => {
                    let x = &mid + &half * t;
                    f(&x)? * w
                }
                Substitution::Chebyshev => {
                    let theta = (t + 1.0) * &half_pi;
                    let x = &mid + &half * theta.cos();
                    f(&x)? * &(w * &half_pi * theta.sin())
                }
            };
            l1 += term.abs();
            sum += term;
        }
        let scale = half.abs();
        sum *= &scale;
        l1 *= &scale;
        if let Some(p) = &prev {
            if converged(&sum, p, &l1.clone().max(sum.abs()), tol) {
                return Ok((sum, n));
            }
        }
        prev = Some(sum);
        n *= 2;
    }
    Err(Error::NonConvergence(format!("integrate_interval: node cap {NODE_CAP} reached")))
}

/// Tanh-sinh integral of `f` over [a, b] for integrands with algebraic or
/// logarithmic endpoint singularities. `f` receives x together with the
/// distances x − a and b − x, computed without cancellation.
pub fn integrate_endpoint_singular<F>(f: F, a: &Real, b: &Real, ctx: PrecisionCtx, tol: &Real) -> Result<Complex>
where
    F: Fn(&Real, &Real, &Real) -> Result<Complex>,
{
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    let mut prev: Option<Complex> = None;
    for level in 2..=14u32 {
        let rule = tanh_sinh(level, ctx);
        let mut sum = ctx.czero();
        let mut l1 = ctx.zero();
        for ((t, g), w) in rule.nodes.iter().zip(&rule.gaps).zip(&rule.weights) {
            let x = &mid + &(&half * t);
            let near = &half * g;
            let (da, db) = if t.is_sign_negative() { (near, b - &x) } else { (&x - a, near) };
            let term = f(&x, &da, &db)? * w;
            l1 += term.abs();
            sum += term;
        }
        sum *= &half;
        l1 *= &half;
        if let Some(p) = &prev {
            if converged(&sum, p, &l1, tol) {
                return Ok(sum);
            }
        }
        prev = Some(sum);
    }
    Err(Error::NonConvergence("integrate_endpoint_singular: level cap reached".into()))
}

/// A closed curve t ↦ z(t), t ∈ [0, 2π), with optional parameters at which
/// the integrand has integrable singularities.
pub trait ClosedPath {
    /// Point and derivative dz/dt.
    fn point(&self, t: &Real) -> Result<(Complex, Complex)>;
    fn singular_params(&self) -> Vec<Real> {
        Vec::new()
    }
}

pub struct Circle {
    pub center: Complex,
    pub radius: Real,
}

impl ClosedPath for Circle {
    fn point(&self, t: &Real) -> Result<(Complex, Complex)> {
        let e = Complex::new(t.cos(), t.sin());
        let z = &self.center + &e.scale(&self.radius);
        let dz = Complex::new(-&e.im, e.re.clone()).scale(&self.radius);
        Ok((z, dz))
    }
}

/// ∮ f(z) dz over `path`. Trapezoid doubling from `n` points when the path has
/// no singular parameters; otherwise tanh-sinh panels between consecutive
/// singular parameters.
pub fn integrate_closed_contour<F, P>(f: F, path: &P, n: usize, ctx: PrecisionCtx) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
    P: ClosedPath,
{
    let two_pi = ctx.pi() * 2.0;
    let tol = ctx.tol();
    let mut cuts = path.singular_params();
    if cuts.is_empty() {
        let mut prev: Option<Complex> = None;
        let mut m = n.max(4);
        while m <= NODE_CAP {
            let mut sum = ctx.czero();
            let mut l1 = ctx.zero();
            for k in 0..m {
                let t = &two_pi * (k as f64) / (m as f64);
                let (z, dz) = path.point(&t)?;
                let term = f(&z)? * &dz;
                l1 += term.abs();
                sum += term;
            }
            let h = &two_pi / (m as f64);
            sum *= &h;
            l1 *= &h;
            if let Some(p) = &prev {
                if converged(&sum, p, &l1, &tol) {
                    return Ok(sum);
                }
            }
            prev = Some(sum);
            m *= 2;
        }
        return Err(Error::NonConvergence("closed contour trapezoid".into()));
    }
    cuts.sort_by(|a, b| a.total_cmp(b));
    let resolvable = Real::pow2(-(3 * ctx.bits as i32) / 4, ctx.bits);
    let mut panels = Vec::new();
    for k in 0..cuts.len() {
        let lo = cuts[k].clone();
        let hi = if k + 1 < cuts.len() { cuts[k + 1].clone() } else { &cuts[0] + &two_pi };
        panels.push((lo, hi));
    }
    let mut total = ctx.czero();
    for (lo, hi) in panels {
        let half = (&hi - &lo) * 0.5;
        let mid = (&hi + &lo) * 0.5;
        let mut prev: Option<Complex> = None;
        let mut done = false;
        for level in 2..=14u32 {
            let rule = tanh_sinh(level, ctx);
            let mut sum = ctx.czero();
            let mut l1 = ctx.zero();
            for ((x, g), w) in rule.nodes.iter().zip(&rule.gaps).zip(&rule.weights) {
                // The parameter cannot resolve nodes closer to a panel end.
                if *g < resolvable {
                    continue;
                }
                let t = &mid + &half * x;
                let (z, dz) = path.point(&t)?;
                let term = f(&z)? * &dz * w;
                l1 += term.abs();
                sum += term;
            }
            sum *= &half;
            l1 *= &half;
            if let Some(p) = &prev {
                if converged(&sum, p, &l1, &tol) {
                    total += sum;
                    done = true;
                    break;
                }
            }
            prev = Some(sum);
        }
        if !done {
            return Err(Error::NonConvergence("closed contour panel".into()));
        }
    }
    Ok(total)
}
