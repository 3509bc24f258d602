//! Moment-based multiple orthogonal polynomials in multiprecision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::curve::Geometry;
use crate::error::{Error, Result};
use crate::kernel::{gauss_legendre, integrate_interval_tol, poly_roots, solve_linear, Matrix, Poly, Substitution};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};
use crate::surface::MultiIndex;
use crate::weight::WeightSpec;

/// Highest precision the ladder will try.
pub const PRECISION_CAP: u32 = 2048;

#[derive(Clone, Debug)]
pub struct MomentTable {
    pub interval: usize,
    /// m_k = ∫ x^k dμ for k = 0..=k_max.
    pub m: Vec<Complex>,
    pub ctx: PrecisionCtx,
}

impl MomentTable {
    pub fn k_max(&self) -> usize {
        self.m.len() - 1
    }

    pub fn get(&self, k: usize) -> &Complex {
        &self.m[k]
    }
}

/// Moments of dμ = v dx. Polynomial densities are integrated exactly term by
/// term; exponential ones by Gauss–Legendre with node doubling.
pub fn compute_moments(weight: &WeightSpec, interval: usize, k_max: usize, ctx: PrecisionCtx) -> Result<MomentTable> {
    let w = weight.with_ctx(ctx)?;
    let (a, b) = w.interval.clone();
    let m = if w.is_polynomial() {
        let top = k_max + w.coeffs.len() + 1;
        let (mut pa, mut pb) = (a.clone(), b.clone());
        let mut diffs = Vec::with_capacity(top);
        for j in 1..=top {
            diffs.push((&pb - &pa) / j as f64);
            pa *= &a;
            pb *= &b;
        }
        (0..=k_max).map(|k| w.coeffs.iter().enumerate().fold(ctx.czero(), |acc, (j, c)| acc + c * &diffs[k + j])).collect()
    } else {
        gauss_moments(&w, k_max, ctx)?
    };
    Ok(MomentTable { interval, m, ctx })
}

fn gauss_moments(w: &WeightSpec, k_max: usize, ctx: PrecisionCtx) -> Result<Vec<Complex>> {
    let (a, b) = w.interval.clone();
    let half = (&b - &a) * 0.5;
    let mid = (&a + &b) * 0.5;
    let tol = ctx.tol();
    let mut prev: Option<Vec<Complex>> = None;
    let mut n = (k_max / 2 + 16).next_power_of_two();
    while n <= 1 << 14 {
        let rule = gauss_legendre(n, ctx);
        let mut m = vec![ctx.czero(); k_max + 1];
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            let x = &mid + &(&half * t);
            let mut term = w.density(&x) * &(wt * &half);
            for mk in m.iter_mut() {
                *mk += &term;
                term *= &x;
            }
        }
        if let Some(p) = &prev {
            let scale = m.iter().map(Complex::abs).fold(ctx.zero(), Real::max);
            let diff = m.iter().zip(p).map(|(u, v)| (u - v).abs()).fold(ctx.zero(), Real::max);
            if diff <= &tol * &scale {
                return Ok(m);
            }
        }
        prev = Some(m);
        n *= 2;
    }
    Err(Error::NonConvergence("moment quadrature".into()))
}

fn check_moments(m1: &MomentTable, m2: &MomentTable, need: usize) -> Result<()> {
    if m1.k_max() < need || m2.k_max() < need {
        return Err(Error::InvalidInput(format!("moment tables too short: need k_max ≥ {need}")));
    }
    Ok(())
}

fn singular_as_non_normal(n: MultiIndex) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Singular(_) => Error::NonNormal(n.to_string()),
        other => other,
    }
}

/// Monic type II polynomial: Σ_j p_j m^{(i)}_{l+j} = −m^{(i)}_{l+|n|} for l < n_i.
pub fn type2(m1: &MomentTable, m2: &MomentTable, n: MultiIndex) -> Result<Poly> {
    let ctx = m1.ctx;
    let size = n.total() as usize;
    if size == 0 {
        return Ok(Poly::one(ctx));
    }
    check_moments(m1, m2, 2 * size)?;
    let mut rows = Vec::with_capacity(size);
    let mut rhs = Vec::with_capacity(size);
    for (m, ni) in [(m1, n.n1), (m2, n.n2)] {
        for l in 0..ni as usize {
            rows.push((0..size).map(|j| m.get(l + j).clone()).collect());
            rhs.push(-m.get(l + size).clone());
        }
    }
    let mut p = solve_linear(&Matrix::from_rows(rows), &rhs, ctx).map_err(singular_as_non_normal(n))?;
    p.push(ctx.cone());
    Ok(Poly::new(p, ctx))
}

/// Type I polynomials normalised by ∫ x^{|n|−1} Q_n = 1.
pub fn type1(m1: &MomentTable, m2: &MomentTable, n: MultiIndex) -> Result<(Poly, Poly)> {
    let ctx = m1.ctx;
    let size = n.total() as usize;
    let zero = || Poly::constant(ctx.czero(), ctx);
    if size == 0 {
        return Ok((zero(), zero()));
    }
    check_moments(m1, m2, 2 * size)?;
    let (n1, n2) = (n.n1 as usize, n.n2 as usize);
    let rows: Vec<Vec<Complex>> =
        (0..size).map(|l| (0..n1).map(|j| m1.get(l + j).clone()).chain((0..n2).map(|j| m2.get(l + j).clone())).collect()).collect();
    let rhs: Vec<Complex> = (0..size).map(|l| if l + 1 == size { ctx.cone() } else { ctx.czero() }).collect();
    let x = solve_linear(&Matrix::from_rows(rows), &rhs, ctx).map_err(singular_as_non_normal(n))?;
    let a1 = if n1 == 0 { zero() } else { Poly::new(x[..n1].to_vec(), ctx) };
    let a2 = if n2 == 0 { zero() } else { Poly::new(x[n1..].to_vec(), ctx) };
    Ok((a1, a2))
}

/// h_{n,i} = ∫ P_n(x) x^{n_i} dμ_i.
pub fn h_constant(moments: &MomentTable, p: &Poly, n: MultiIndex, i: usize) -> Complex {
    let ni = n.get(i) as usize;
    p.coeffs.iter().enumerate().fold(moments.ctx.czero(), |acc, (j, c)| acc + c * moments.get(j + ni))
}

/// a_{n,i} = h_{n,i}/h_{n−e_i,i}.
pub fn recurrence_a(h_parent: &Complex, h_child: &Complex) -> Result<Complex> {
    if h_parent.abs().is_zero() {
        return Err(Error::DivisionByZero("h_{n−e_i,i} vanishes".into()));
    }
    Ok(h_child / h_parent)
}

/// b_{n,i} = (x^{|n|−1} coefficient of P_n) − (x^{|n|} coefficient of P_{n+e_i}).
pub fn recurrence_b(p_n: &Poly, p_next: &Poly) -> Result<Complex> {
    if p_next.degree() != p_n.degree() + 1 {
        return Err(Error::DivisionByZero("neighbouring index is not normal".into()));
    }
    Ok(p_n.subleading() - p_next.subleading())
}

/// R(z) = (1/2πi) ∫ P(x)ρ(x)/(x − z) dx = ∫ P(x) v(x)/(z − x) dx.
pub fn second_kind(p: &Poly, weight: &WeightSpec, z: &Complex, ctx: PrecisionCtx) -> Result<Complex> {
    let (a, b) = weight.interval.clone();
    if z.im.is_zero() && a <= z.re && z.re <= b {
        return Err(Error::OnCut { a: a.to_f64(), b: b.to_f64() });
    }
    let f = |x: &Real| Ok(p.eval_real(x) * weight.density(x) / (z - x));
    let n0 = (p.degree() + 8).next_power_of_two();
    Ok(integrate_interval_tol(f, &a, &b, ctx, Substitution::None, &ctx.tol(), n0)?.0)
}

/// ∫ P Q_n for the linear form Q_n = A1 dμ1 + A2 dμ2.
pub fn biorthogonality(p: &Poly, a1: &Poly, a2: &Poly, m1: &MomentTable, m2: &MomentTable) -> Complex {
    let ctx = m1.ctx;
    let pair = |a: &Poly, m: &MomentTable| {
        let mut acc = ctx.czero();
        for (k, pk) in p.coeffs.iter().enumerate() {
            for (j, aj) in a.coeffs.iter().enumerate() {
                acc += &(pk * aj) * m.get(k + j);
            }
        }
        acc
    };
    pair(a1, m1) + pair(a2, m2)
}

/// Largest |∫ P x^l dμ_i| over the type II conditions, relative to the moment scale.
pub fn orthogonality_residual(p: &Poly, n: MultiIndex, m1: &MomentTable, m2: &MomentTable) -> Real {
    let ctx = m1.ctx;
    let mut worst = ctx.zero();
    for (m, ni) in [(m1, n.n1), (m2, n.n2)] {
        let scale = m.m.iter().take(p.degree() + ni as usize + 1).map(Complex::abs).fold(ctx.zero(), Real::max);
        for l in 0..ni as usize {
            let v = p.coeffs.iter().enumerate().fold(ctx.czero(), |acc, (j, c)| acc + c * m.get(l + j));
            worst = worst.max(v.abs() / &scale);
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct MopResult {
    pub n: MultiIndex,
    /// Monic type II polynomial of degree |n|.
    pub p: Poly,
    /// Type I polynomials A^{(1)}, A^{(2)}.
    pub a1: Poly,
    pub a2: Poly,
    /// (h_{n,1}, h_{n,2}).
    pub h: (Complex, Complex),
    /// Precision at which the returned values were computed.
    pub bits: u32,
    /// Bits of agreement between the two rungs of the precision ladder.
    pub agreement_bits: f64,
    /// Set when the ladder reached the precision cap without agreement.
    pub ill_conditioned: bool,
}

impl MopResult {
    pub fn h(&self, i: usize) -> &Complex {
        if i == 1 {
            &self.h.0
        } else {
            &self.h.1
        }
    }

    pub fn type1(&self, i: usize) -> &Poly {
        if i == 1 {
            &self.a1
        } else {
            &self.a2
        }
    }
}

fn relative_gap(u: &[&Poly], v: &[&Poly], prec: u32) -> f64 {
    let mut scale = Real::zero(prec);
    let mut diff = Real::zero(prec);
    for (p, q) in u.iter().zip(v) {
        for k in 0..=p.degree().max(q.degree()) {
            scale = scale.max(q.coeff(k).abs());
            diff = diff.max((p.coeff(k) - q.coeff(k)).abs());
        }
    }
    if diff.is_zero() {
        return f64::INFINITY;
    }
    if scale.is_zero() {
        return 0.0;
    }
    -(diff / scale).ln().to_f64() / std::f64::consts::LN_2
}

/// Brute-force oracle with per-precision moment caches and a result memo.
#[derive(Debug)]
pub struct MopOracle {
    pub weights: (WeightSpec, WeightSpec),
    pub ctx: PrecisionCtx,
    moments: Mutex<HashMap<u32, Arc<(MomentTable, MomentTable)>>>,
    results: Mutex<HashMap<MultiIndex, Arc<MopResult>>>,
}

impl MopOracle {
    pub fn new(weights: (WeightSpec, WeightSpec), ctx: PrecisionCtx) -> Self {
        MopOracle { weights, ctx, moments: Mutex::new(HashMap::new()), results: Mutex::new(HashMap::new()) }
    }

    /// Moment tables at `bits` with k_max at least `k_max`.
    pub fn moments(&self, bits: u32, k_max: usize) -> Result<Arc<(MomentTable, MomentTable)>> {
        if let Some(t) = self.moments.lock().expect("moment cache").get(&bits) {
            if t.0.k_max() >= k_max {
                return Ok(t.clone());
            }
        }
        let ctx = PrecisionCtx::with_guard(bits, self.ctx.guard_bits)?;
        let k = k_max.max(16).next_power_of_two() + 4;
        let t = Arc::new((compute_moments(&self.weights.0, 1, k, ctx)?, compute_moments(&self.weights.1, 2, k, ctx)?));
        self.moments.lock().expect("moment cache").insert(bits, t.clone());
        Ok(t)
    }

    fn solve_at(&self, n: MultiIndex, bits: u32) -> Result<(Poly, Poly, Poly)> {
        let t = self.moments(bits, 2 * n.total() as usize + 4)?;
        let p = type2(&t.0, &t.1, n)?;
        let (a1, a2) = type1(&t.0, &t.1, n)?;
        Ok((p, a1, a2))
    }

    /// P_n, type I polynomials and h-constants through the precision ladder:
    /// solve at P and 2P bits and accept once they agree to P/2 bits.
    pub fn solve(&self, n: MultiIndex) -> Result<Arc<MopResult>> {
        if let Some(r) = self.results.lock().expect("result memo").get(&n) {
            return Ok(r.clone());
        }
        let target = self.ctx.bits;
        let mut bits = target;
        let mut lo = self.solve_at(n, bits)?;
        let (best, agreement, ill) = loop {
            if bits * 2 > PRECISION_CAP {
                break (lo, 0.0, true);
            }
            let hi = self.solve_at(n, bits * 2)?;
            let agree = relative_gap(&[&lo.0, &lo.1, &lo.2], &[&hi.0, &hi.1, &hi.2], bits * 2);
            if agree >= (bits / 2) as f64 {
                break (hi, agree, false);
            }
            bits *= 2;
            lo = hi;
        };
        let round = |p: &Poly| Poly::new(p.coeffs.iter().map(|c| c.with_prec(target)).collect(), self.ctx);
        let t = self.moments(self.ctx.bits, 2 * n.total() as usize + 4)?;
        let p = round(&best.0);
        let h = (h_constant(&t.0, &p, n, 1), h_constant(&t.1, &p, n, 2));
        let result = Arc::new(MopResult {
            n,
            p,
            a1: round(&best.1),
            a2: round(&best.2),
            h,
            bits: if ill { bits } else { bits * 2 },
            agreement_bits: agreement,
            ill_conditioned: ill,
        });
        self.results.lock().expect("result memo").insert(n, result.clone());
        Ok(result)
    }

    /// (a_{n,i}, b_{n,i}) from h_{n,i}/h_{n−e_i,i} and the sub-leading coefficients.
    pub fn recurrence(&self, n: MultiIndex, i: usize) -> Result<(Complex, Complex)> {
        let parent = n.minus(i).ok_or_else(|| Error::InvalidInput(format!("a_{{n,{i}}} needs n_{i} ≥ 1")))?;
        let r = self.solve(n)?;
        let a = recurrence_a(self.solve(parent)?.h(i), r.h(i))?;
        let b = recurrence_b(&r.p, &self.solve(n.plus(i))?.p)?;
        Ok((a, b))
    }

    /// Largest coefficient of x P_n − P_{n+e_i} − b P_n − a₁P_{n−e₁} − a₂P_{n−e₂}
    /// relative to the largest coefficient of x P_n.
    pub fn recurrence_residual(&self, n: MultiIndex, i: usize) -> Result<Real> {
        let ctx = self.ctx;
        let p = self.solve(n)?.p.clone();
        let mut r = p.shift().sub(&self.solve(n.plus(i))?.p);
        let (_, b) = self.recurrence(n, i)?;
        r = r.sub(&p.scale(&b));
        for j in [1, 2] {
            if let Some(m) = n.minus(j) {
                let a = recurrence_a(self.solve(m)?.h(j), self.solve(n)?.h(j))?;
                r = r.sub(&self.solve(m)?.p.scale(&a));
            }
        }
        let scale = p.norm_inf().max(ctx.one());
        Ok(r.norm_inf() / scale)
    }
}

/// Zeros of P in each open interval of the geometry, and elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroCounts {
    pub in1: usize,
    pub in2: usize,
    pub elsewhere: usize,
}

pub fn zero_counts(p: &Poly, geometry: &Geometry) -> Result<ZeroCounts> {
    let mut counts = ZeroCounts { in1: 0, in2: 0, elsewhere: 0 };
    if p.degree() == 0 {
        return Ok(counts);
    }
    let imag_tol = Real::pow2(-(p.ctx.bits as i32) / 4, p.ctx.bits);
    for r in poly_roots(p)? {
        let real = r.im.abs() <= imag_tol;
        if real && geometry.alpha1 < r.re && r.re < geometry.beta1 {
            counts.in1 += 1;
        } else if real && geometry.alpha2 < r.re && r.re < geometry.beta2 {
            counts.in2 += 1;
        } else {
            counts.elsewhere += 1;
        }
    }
    Ok(counts)
}

/// Splits the zeros of P between the intervals by distance, returning the
/// two monic factors and the number of zeros equidistant from both.
pub fn split_by_interval(p: &Poly, geometry: &Geometry) -> Result<(Poly, Poly, usize)> {
    let ctx = p.ctx;
    if p.degree() == 0 {
        return Ok((Poly::one(ctx), Poly::one(ctx), 0));
    }
    let dist = |z: &Complex, a: &Real, b: &Real| {
        let x = z.re.clone().max(a.clone()).min(b.clone());
        (z - &x).abs()
    };
    let (mut f1, mut f2, mut ties) = (Vec::new(), Vec::new(), 0);
    let tie = ctx.third();
    for r in poly_roots(p)? {
        let d1 = dist(&r, &geometry.alpha1, &geometry.beta1);
        let d2 = dist(&r, &geometry.alpha2, &geometry.beta2);
        if (&d1 - &d2).abs() <= tie {
            ties += 1;
        }
        if d1 <= d2 {
            f1.push(r);
        } else {
            f2.push(r);
        }
    }
    Ok((Poly::from_roots(&f1, ctx), Poly::from_roots(&f2, ctx), ties))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::default()
    }

    fn lebesgue_pair(c: PrecisionCtx) -> (WeightSpec, WeightSpec) {
        (WeightSpec::lebesgue(c.int(-1), c.ratio(-1, 3), c).unwrap(), WeightSpec::lebesgue(c.ratio(1, 3), c.one(), c).unwrap())
    }

    #[test]
    fn lebesgue_moments() {
        let c = ctx();
        let (w1, _) = lebesgue_pair(c);
        let m = compute_moments(&w1, 1, 4, c).unwrap();
        assert!((m.get(0) - &Complex::from_real(c.ratio(2, 3))).abs() < 1e-70);
        assert!((m.get(1) - &Complex::from_real(c.ratio(-4, 9))).abs() < 1e-70);
        assert!((m.get(2) - &Complex::from_real(c.ratio(26, 81))).abs() < 1e-70);
    }

    #[test]
    fn type1_first_index() {
        let c = ctx();
        let (w1, w2) = lebesgue_pair(c);
        let (m1, m2) = (compute_moments(&w1, 1, 8, c).unwrap(), compute_moments(&w2, 2, 8, c).unwrap());
        let (a1, a2) = type1(&m1, &m2, MultiIndex::new(1, 0)).unwrap();
        assert!((a1.coeff(0) - Complex::from_real(c.ratio(3, 2))).abs() < 1e-70);
        assert!(a2.coeff(0).abs().is_zero());
    }

    #[test]
    fn second_kind_decay() {
        let c = ctx();
        let oracle = MopOracle::new(lebesgue_pair(c), c);
        let r = oracle.solve(MultiIndex::new(1, 0)).unwrap();
        let z = c.complex(1e4, 0.0);
        let v = second_kind(&r.p, &oracle.weights.0, &z, c).unwrap() * &z * &z;
        let h = Complex::from_real(c.ratio(2, 81));
        assert!(((v - &h) / h).abs() < 1e-3);
    }
}
