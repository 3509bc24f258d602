//! Analytic weights ρ on an interval, with dμ = −ρ dx/(2πi).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::{poly_roots, Poly};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// v(x) = Σ c_k x^k, real and positive on the interval.
    PositivePoly,
    /// v(x) = exp(Σ c_k x^k) with real coefficients.
    ExpPoly,
    /// v(x) = Σ c_k x^k with complex coefficients, non-vanishing on the interval.
    ComplexPoly,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::PositivePoly => "positive-poly",
            WeightKind::ExpPoly => "exp-poly",
            WeightKind::ComplexPoly => "complex-poly",
        })
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive-poly" => Ok(WeightKind::PositivePoly),
            "exp-poly" => Ok(WeightKind::ExpPoly),
            "complex-poly" => Ok(WeightKind::ComplexPoly),
            other => Err(Error::Parse(format!("unknown weight kind {other:?}"))),
        }
    }
}

/// ρ(x) = −2πi·v(x) on [a, b]; the measure is v(x) dx.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub coeffs: Vec<Complex>,
    pub interval: (Real, Real),
    poly: Poly,
    /// Roots of v for the complex kind, used for the continuous logarithm.
    roots: Vec<Complex>,
    /// Multiple of 2πi removed so that log v(a) is the principal value.
    branch_shift: Real,
}

impl WeightSpec {
    pub fn new(kind: WeightKind, coeffs: Vec<Complex>, a: Real, b: Real, ctx: PrecisionCtx) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidInput(format!("weight interval [{}, {}] is empty", a.to_sci(8), b.to_sci(8))));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("weight needs at least one coefficient".into()));
        }
        let poly = Poly::new(coeffs.clone(), ctx);
        let mut spec = WeightSpec { kind, coeffs, interval: (a, b), poly, roots: Vec::new(), branch_shift: ctx.zero() };
        if kind != WeightKind::ComplexPoly && spec.coeffs.iter().any(|c| !c.im.is_zero()) {
            return Err(Error::InvalidInput(format!("{kind} weight needs real coefficients")));
        }
        match kind {
            WeightKind::ExpPoly => {}
            WeightKind::PositivePoly => {
                spec.check_no_zero_on_interval(ctx)?;
                let mid = (&spec.interval.0 + &spec.interval.1) * 0.5;
                if spec.poly.eval_real(&mid).re <= 0.0 {
                    return Err(Error::InvalidInput("positive-poly weight is negative on its interval".into()));
                }
            }
            WeightKind::ComplexPoly => {
                spec.check_no_zero_on_interval(ctx)?;
                if spec.poly.degree() > 0 {
                    spec.roots = poly_roots(&spec.poly)?;
                }
                let principal = spec.poly.eval_real(&spec.interval.0).ln();
                let raw = spec.log_v_unshifted(&spec.interval.0);
                let two_pi = ctx.pi() * 2.0;
                let k = ((&raw.im - &principal.im) / &two_pi).to_f64().round();
                spec.branch_shift = two_pi * k;
            }
        }
        Ok(spec)
    }

    /// The same weight rebuilt at another precision.
    pub fn with_ctx(&self, ctx: PrecisionCtx) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.with_prec(ctx.bits)).collect();
        WeightSpec::new(self.kind, coeffs, self.interval.0.with_prec(ctx.bits), self.interval.1.with_prec(ctx.bits), ctx)
    }

    pub fn is_polynomial(&self) -> bool {
        self.kind != WeightKind::ExpPoly
    }

    /// Lebesgue measure dx on [a, b].
    pub fn lebesgue(a: Real, b: Real, ctx: PrecisionCtx) -> Result<Self> {
        WeightSpec::new(WeightKind::PositivePoly, vec![ctx.cone()], a, b, ctx)
    }

    fn check_no_zero_on_interval(&self, ctx: PrecisionCtx) -> Result<()> {
        if self.poly.degree() == 0 {
            if self.poly.coeff(0).abs().is_zero() {
                return Err(Error::WindingDetected(self.interval.0.to_f64()));
            }
            return Ok(());
        }
        let (a, b) = &self.interval;
        let slack = ctx.third() * (b - a).max(ctx.one());
        for r in poly_roots(&self.poly)? {
            if r.im.abs() <= slack && r.re >= a - &slack && r.re <= b + &slack {
                return Err(Error::WindingDetected(r.re.to_f64()));
            }
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.kind != WeightKind::ComplexPoly
    }

    pub fn contains(&self, x: &Real) -> bool {
        self.interval.0 <= *x && *x <= self.interval.1
    }

    /// Density v(x) of the measure dμ = v(x) dx.
    pub fn density(&self, x: &Real) -> Complex {
        let p = self.poly.eval_real(x);
        match self.kind {
            WeightKind::ExpPoly => p.exp(),
            _ => p,
        }
    }

    /// ρ(x) = −2πi·v(x).
    pub fn rho(&self, x: &Real) -> Complex {
        let v = self.density(x);
        let two_pi = Real::pi(x.prec()) * 2.0;
        Complex::new(&v.im * &two_pi, -(&v.re * &two_pi))
    }

    fn log_v_unshifted(&self, x: &Real) -> Complex {
        let z = Complex::from_real(x.clone());
        let mut acc = self.poly.leading().ln();
        for r in &self.roots {
            acc += (&z - r).ln();
        }
        acc
    }

    /// Continuous determination of log v on the interval.
    pub fn log_density(&self, x: &Real) -> Complex {
        match self.kind {
            WeightKind::PositivePoly => Complex::from_real(self.poly.eval_real(x).re.ln()),
            WeightKind::ExpPoly => self.poly.eval_real(x),
            WeightKind::ComplexPoly => {
                let mut v = self.log_v_unshifted(x);
                v.im -= &self.branch_shift;
                v
            }
        }
    }

    /// log ρ = log v + log(2π) − iπ/2, continuous along the interval.
    pub fn log_rho(&self, x: &Real) -> Complex {
        let prec = x.prec();
        let pi = Real::pi(prec);
        let mut v = self.log_density(x);
        v.re += (&pi * 2.0).ln();
        v.im -= pi * 0.5;
        v
    }
}

/// Samples of a continuous branch of log ρ on a uniform grid.
#[derive(Clone, Debug)]
pub struct LogSamples {
    pub xs: Vec<Real>,
    pub values: Vec<Complex>,
}

/// Continuous log ρ at `samples` equally spaced points by argument unwrapping
/// on an eight-fold refined grid.
pub fn log_weight_determination(weight: &WeightSpec, samples: usize, ctx: PrecisionCtx) -> Result<LogSamples> {
    let samples = samples.max(2);
    let (a, b) = &weight.interval;
    let at = |k: usize, n: usize| a + &((b - a) * (k as f64) / ((n - 1) as f64));
    let xs: Vec<Real> = (0..samples).map(|k| at(k, samples)).collect();
    if weight.is_positive() {
        let half_pi = ctx.pi() * 0.5;
        let values = xs
            .iter()
            .map(|x| {
                let rho = weight.rho(x);
                Complex::new(rho.abs().ln(), -half_pi.clone())
            })
            .collect();
        return Ok(LogSamples { xs, values });
    }
    let refine = 8;
    let fine = (samples - 1) * refine + 1;
    let floor = ctx.tol();
    let pi = ctx.pi();
    let mut values = Vec::with_capacity(samples);
    let mut prev: Option<Complex> = None;
    for k in 0..fine {
        let x = at(k, fine);
        let rho = weight.rho(&x);
        if rho.abs() <= floor {
            return Err(Error::WindingDetected(x.to_f64()));
        }
        let principal = rho.ln();
        let cur = match &prev {
            None => weight.log_rho(&x),
            Some(p) => {
                let mut d = &principal.im - &p.im;
                while d > pi {
                    d -= &pi * 2.0;
                }
                while d <= -pi.clone() {
                    d += &pi * 2.0;
                }
                if d.abs() > &pi * 0.5 {
                    return Err(Error::WindingDetected(x.to_f64()));
                }
                Complex::new(principal.re, &p.im + &d)
            }
        };
        if k % refine == 0 {
            values.push(cur.clone());
        }
        prev = Some(cur);
    }
    Ok(LogSamples { xs, values })
}
