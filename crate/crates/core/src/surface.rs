//! Functions on the surface: h_c, the equilibrium densities and the
//! geometric factor Φ_n.

use std::fmt;

use crate::curve::{cut_index, sheet_values, CurveParams, Side};
use crate::error::{Error, Result};
use crate::kernel::{integrate_interval_tol, Substitution};
use crate::precision::PrecisionCtx;
use crate::scalar::{Complex, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub n1: u32,
    pub n2: u32,
}

impl MultiIndex {
    pub fn new(n1: u32, n2: u32) -> Self {
        MultiIndex { n1, n2 }
    }

    pub fn total(&self) -> u32 {
        self.n1 + self.n2
    }

    pub fn get(&self, i: usize) -> u32 {
        if i == 1 {
            self.n1
        } else {
            self.n2
        }
    }

    /// c(n) = n1/|n|.
    pub fn ratio(&self, ctx: PrecisionCtx) -> Real {
        ctx.ratio(self.n1 as i64, self.total().max(1) as i64)
    }

    /// ε_n = 1/min(n1, n2), undefined when either component vanishes.
    pub fn eps(&self) -> Option<f64> {
        let m = self.n1.min(self.n2);
        (m > 0).then(|| 1.0 / m as f64)
    }

    pub fn plus(&self, i: usize) -> Self {
        if i == 1 {
            MultiIndex::new(self.n1 + 1, self.n2)
        } else {
            MultiIndex::new(self.n1, self.n2 + 1)
        }
    }

    pub fn minus(&self, i: usize) -> Option<Self> {
        match i {
            1 if self.n1 > 0 => Some(MultiIndex::new(self.n1 - 1, self.n2)),
            2 if self.n2 > 0 => Some(MultiIndex::new(self.n1, self.n2 - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

/// h on the branch through χ: Π(χ)(χ − χ*)/((χ−B1)(χ−B2)).
pub fn h_of_chi(p: &CurveParams, chi: &Complex) -> Complex {
    let num = chi - &p.chi_star;
    let den = (chi - &p.b1) * (chi - &p.b2);
    p.dz_of(chi).recip() * num / den
}

pub fn h_value(p: &CurveParams, sheet: usize, z: &Complex, side: Side, ctx: PrecisionCtx) -> Result<Complex> {
    let chis = sheet_values(p, z, side, ctx)?;
    Ok(h_of_chi(p, &chis[sheet]))
}

/// ω′_{c,i}(x) = (h⁽ⁱ⁾₊ − h⁽ⁱ⁾₋)(x)/(2πi).
pub fn equilibrium_density(p: &CurveParams, i: usize, x: &Real, ctx: PrecisionCtx) -> Result<Real> {
    let (a, b) = p.support(i);
    if !(a < *x && *x < b) {
        return Err(Error::OutsideSupport { x: x.to_f64(), a: a.to_f64(), b: b.to_f64() });
    }
    let z = Complex::from_real(x.clone());
    let chis = sheet_values(p, &z, Side::Plus, ctx)?;
    let h_plus = h_of_chi(p, &chis[i]);
    // The minus trace is the conjugate of the plus trace.
    Ok(h_plus.im / ctx.pi())
}

/// |ω_{c,i}| by Chebyshev-substituted Gauss–Legendre quadrature.
pub fn equilibrium_mass(p: &CurveParams, i: usize, ctx: PrecisionCtx) -> Result<Real> {
    let (a, b) = p.support(i);
    let f = |x: &Real| equilibrium_density(p, i, x, ctx).map(Complex::from_real);
    let (v, _) = integrate_interval_tol(f, &a, &b, ctx, Substitution::Chebyshev, &ctx.tol(), 32)?;
    Ok(v.re)
}

/// Logarithmic potential V^{ω_{c,i}}(z) = −∫ log|z − x| dω_{c,i}(x).
pub fn log_potential(p: &CurveParams, i: usize, z: &Complex, ctx: PrecisionCtx) -> Result<Real> {
    let (a, b) = p.support(i);
    if let Some(j) = cut_index(p, z) {
        if j == i {
            return Err(Error::DomainViolation("potential probe on the support".into()));
        }
    }
    let f = |x: &Real| {
        let d = equilibrium_density(p, i, x, ctx)?;
        Ok(Complex::from_real(-((z - x).abs().ln() * d)))
    };
    let (v, _) = integrate_interval_tol(f, &a, &b, ctx, Substitution::Chebyshev, &ctx.tol(), 32)?;
    Ok(v.re)
}

/// τ_n, the real cube root of (−1)^{n2} A1^{−n1} A2^{−n2} B^{−|n|}.
pub fn tau_n(p: &CurveParams, n: MultiIndex) -> Real {
    let log_abs = -(p.a1.ln() * n.n1 as f64 + p.a2.ln() * n.n2 as f64 + p.gap().ln() * n.total() as f64) / 3.0;
    let t = log_abs.exp();
    if n.n2 % 2 == 1 {
        -t
    } else {
        t
    }
}

/// Φ_n on one sheet, kept as a logarithm so large |n| cannot overflow.
#[derive(Clone, Debug)]
pub struct PhiValue {
    pub tau: Real,
    /// A determination of log Φ_n; only its exponential is meaningful.
    pub log: Complex,
}

impl PhiValue {
    pub fn value(&self) -> Complex {
        self.log.exp()
    }

    pub fn log_abs(&self) -> Real {
        self.log.re.clone()
    }
}

/// Φ_n = τ_n (χ−B1)^{n1}(χ−B2)^{n2} at the point χ of the surface.
pub fn phi_n_of_chi(p: &CurveParams, n: MultiIndex, chi: &Complex) -> PhiValue {
    let tau = tau_n(p, n);
    let prec = p.prec();
    let mut log = Complex::new(tau.abs().ln(), if tau.is_sign_negative() { Real::pi(prec) } else { Real::zero(prec) });
    if n.n1 > 0 {
        log += (chi - &p.b1).ln() * (n.n1 as f64);
    }
    if n.n2 > 0 {
        log += (chi - &p.b2).ln() * (n.n2 as f64);
    }
    PhiValue { tau, log }
}

pub fn phi_n_value(p: &CurveParams, n: MultiIndex, sheet: usize, z: &Complex, side: Side, ctx: PrecisionCtx) -> Result<PhiValue> {
    let chis = sheet_values(p, z, side, ctx)?;
    Ok(phi_n_of_chi(p, n, &chis[sheet]))
}

#[derive(Clone, Debug)]
pub struct PotentialCheck {
    pub l1: Real,
    pub l2: Real,
    /// Largest deviation of the sheet-0 and sheet-1 potential identities,
    /// divided by |n|, over the probes after the first.
    pub residual: Real,
}

/// Fits ℓ_{n,1}, ℓ_{n,2} from the sheet-0 and sheet-1 identities
/// log|Φ⁽⁰⁾| = |n|(−V^{ω1+ω2} + (ℓ1+ℓ2)/3),
/// log|Φ⁽¹⁾| = |n|(V^{ω1} + (ℓ2−2ℓ1)/3)
/// at the first probe and reports how well the remaining probes satisfy them.
pub fn potential_consistency(p: &CurveParams, n: MultiIndex, probes: &[Complex], ctx: PrecisionCtx) -> Result<PotentialCheck> {
    if probes.len() < 2 {
        return Err(Error::InvalidInput("potential_consistency needs at least two probes".into()));
    }
    let total = n.total() as f64;
    let constants = |z: &Complex| -> Result<(Real, Real)> {
        let chis = sheet_values(p, z, Side::Off, ctx)?;
        let v1 = log_potential(p, 1, z, ctx)?;
        let v2 = log_potential(p, 2, z, ctx)?;
        let k0 = phi_n_of_chi(p, n, &chis[0]).log_abs() / total + &v1 + &v2;
        let k1 = phi_n_of_chi(p, n, &chis[1]).log_abs() / total - &v1;
        Ok((k0, k1))
    };
    let (k0, k1) = constants(&probes[0])?;
    let mut residual = ctx.zero();
    for z in &probes[1..] {
        let (m0, m1) = constants(z)?;
        residual = residual.max((m0 - &k0).abs()).max((m1 - &k1).abs());
    }
    let l1 = &k0 - &k1;
    let l2 = &k0 * 2.0 + &k1;
    Ok(PotentialCheck { l1, l2, residual })
}
