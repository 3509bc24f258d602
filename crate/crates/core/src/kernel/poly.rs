use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};

/// Dense polynomial with complex coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Complex>,
    pub ctx: PrecisionCtx,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex>, ctx: PrecisionCtx) -> Self {
        let mut p = Poly { coeffs, ctx };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[Real], ctx: PrecisionCtx) -> Self {
        Poly::new(coeffs.iter().cloned().map(Complex::from_real).collect(), ctx)
    }

    pub fn constant(c: Complex, ctx: PrecisionCtx) -> Self {
        Poly::new(vec![c], ctx)
    }

    pub fn one(ctx: PrecisionCtx) -> Self {
        Poly::constant(ctx.cone(), ctx)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex], ctx: PrecisionCtx) -> Self {
        let mut p = Poly::one(ctx);
        for r in roots {
            p = p.mul(&Poly::new(vec![-r, ctx.cone()], ctx));
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 {
            let last = self.coeffs.last().expect("nonempty");
            if last.re.is_zero() && last.im.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(self.ctx.czero());
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Complex {
        self.coeffs.last().expect("nonempty")
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.ctx.czero())
    }

    /// Coefficient of x^(deg−1); zero for constants.
    pub fn subleading(&self) -> Complex {
        if self.degree() == 0 {
            self.ctx.czero()
        } else {
            self.coeffs[self.degree() - 1].clone()
        }
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn eval_real(&self, x: &Real) -> Complex {
        let mut re = self.leading().re.clone();
        let mut im = self.leading().im.clone();
        for c in self.coeffs.iter().rev().skip(1) {
            re = re * x + &c.re;
            im = im * x + &c.im;
        }
        Complex::new(re, im)
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::constant(self.ctx.czero(), self.ctx);
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * (k as f64)).collect();
        Poly::new(coeffs, self.ctx)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect(), self.ctx)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect(), self.ctx)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![self.ctx.czero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out, self.ctx)
    }

    pub fn scale(&self, k: &Complex) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect(), self.ctx)
    }

    /// Multiplication by x.
    pub fn shift(&self) -> Poly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.ctx.czero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs, self.ctx)
    }

    pub fn monic(&self) -> Poly {
        let lead = self.leading().clone();
        Poly::new(self.coeffs.iter().map(|c| c / &lead).collect(), self.ctx)
    }

    /// Max-modulus coefficient norm.
    pub fn norm_inf(&self) -> Real {
        self.coeffs.iter().map(|c| c.abs()).fold(self.ctx.zero(), Real::max)
    }

    /// Some(1) when p(−x) = p(x), Some(−1) when p(−x) = −p(x), coefficientwise up to `tol`.
    pub fn parity(&self, tol: &Real) -> Option<i32> {
        let odd_small = self.coeffs.iter().skip(1).step_by(2).all(|c| c.abs() <= *tol);
        let even_small = self.coeffs.iter().step_by(2).all(|c| c.abs() <= *tol);
        if odd_small {
            Some(1)
        } else if even_small {
            Some(-1)
        } else {
            None
        }
    }
}

fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius =
        bound.min(monic[..n].iter().enumerate().map(|(k, c)| 2.0 * c.norm().powf(1.0 / (n - k) as f64)).fold(0.0, f64::max).max(1e-3));
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4)).collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = monic[n];
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic[..n].iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// All roots of `p` with multiplicity.
///
/// Double-precision Aberth iteration supplies starting values that are then
/// refined by multiprecision Aberth sweeps until every residual satisfies
/// |p(r)| ≤ 2^(−bits/2)·‖p‖.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidInput("poly_roots needs degree ≥ 1".into()));
    }
    let ctx = p.ctx;
    let q = p.monic();
    if n == 1 {
        return Ok(vec![-q.coeffs[0].clone()]);
    }
    let seeds = aberth_f64(&q.coeffs.iter().map(|c| c.to_c64()).collect::<Vec<_>>());
    let mut z: Vec<Complex> = seeds
        .iter()
        .map(|s| {
            let s = if s.is_finite() { *s } else { Complex64::new(0.5, 0.5) };
            Complex::from_c64(s, ctx.bits)
        })
        .collect();
    let dq = q.derivative();
    let scale = q.norm_inf();
    let target = ctx.tol() * &scale;
    let max_iter = 40 + 4 * ctx.bits as usize;
    let mut polish = 0;
    for _ in 0..max_iter {
        let residuals: Vec<Complex> = z.iter().map(|r| q.eval(r)).collect();
        if residuals.iter().all(|r| r.abs() <= target) {
            // Two more sweeps take simple roots from half to full precision.
            if polish == 2 {
                return Ok(z);
            }
            polish += 1;
        }
        for i in 0..n {
            let pv = q.eval(&z[i]);
            if pv.abs() <= ctx.eps() * &scale {
                continue;
            }
            let ratio = &pv / &dq.eval(&z[i]);
            let mut s = ctx.czero();
            for j in 0..n {
                if j != i {
                    s += (&z[i] - &z[j]).recip();
                }
            }
            let denom = ctx.cone() - &ratio * &s;
            let step = &ratio / &denom;
            if step.is_finite() {
                z[i] = &z[i] - &step;
            }
        }
    }
    Err(Error::NonConvergence(format!("poly_roots: degree {n} did not reach residual target")))
}
