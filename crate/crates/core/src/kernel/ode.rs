use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::scalar::Real;

/// Accepted steps of an adaptive integration, with cubic Hermite dense output.
#[derive(Clone, Debug)]
pub struct OdePath {
    pub ts: Vec<Real>,
    pub ys: Vec<Vec<Real>>,
    pub fs: Vec<Vec<Real>>,
    pub rejected: usize,
}

impl OdePath {
    pub fn last(&self) -> &[Real] {
        self.ys.last().expect("path has at least the initial point")
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// Dense output at `t` inside the integrated range.
    pub fn eval(&self, t: &Real) -> Result<Vec<Real>> {
        let n = self.ts.len();
        let forward = n < 2 || self.ts[n - 1] >= self.ts[0];
        let inside = |a: &Real, b: &Real| if forward { a <= t && t <= b } else { b <= t && t <= a };
        if !inside(&self.ts[0], &self.ts[n - 1]) {
            return Err(Error::DomainViolation(format!("t = {} outside the integrated range", t.to_sci(8))));
        }
        if n == 1 {
            return Ok(self.ys[0].clone());
        }
        let k = self.ts.windows(2).position(|w| inside(&w[0], &w[1])).unwrap_or(n - 2);
        let (t0, t1) = (&self.ts[k], &self.ts[k + 1]);
        let h = t1 - t0;
        let s = (t - t0) / &h;
        let s2 = s.square();
        let s3 = &s2 * &s;
        let h00 = &s3 * 2.0 - &s2 * 3.0 + 1.0;
        let h10 = &s3 - &s2 * 2.0 + &s;
        let h01 = &s3 * -2.0 + &s2 * 3.0;
        let h11 = &s3 - &s2;
        Ok((0..self.ys[k].len())
            .map(|i| &h00 * &self.ys[k][i] + &h10 * &h * &self.fs[k][i] + &h01 * &self.ys[k + 1][i] + &h11 * &h * &self.fs[k + 1][i])
            .collect())
    }
}

const C: [(i64, i64); 7] = [(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)];
const A: [&[(i64, i64)]; 7] = [
    &[],
    &[(1, 5)],
    &[(3, 40), (9, 40)],
    &[(44, 45), (-56, 15), (32, 9)],
    &[(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729)],
    &[(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656)],
    &[(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
];
const B5: [(i64, i64); 7] = [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)];
const B4: [(i64, i64); 7] = [(5179, 57600), (0, 1), (7571, 16695), (393, 640), (-92097, 339200), (187, 2100), (1, 40)];

/// Dormand–Prince 5(4) integration of y′ = field(t, y) from `c0` to `c1`.
///
/// The step is accepted when max_i |err_i|/(1 + |y_i|) ≤ tol. The direction of
/// integration follows the sign of c1 − c0.
pub fn ode_solve<F>(field: F, c0: &Real, y0: &[Real], c1: &Real, tol: f64, ctx: PrecisionCtx) -> Result<OdePath>
where
    F: Fn(&Real, &[Real]) -> Result<Vec<Real>>,
{
    let r = |(p, q): (i64, i64)| ctx.ratio(p, q);
    let c: Vec<Real> = C.iter().copied().map(r).collect();
    let a: Vec<Vec<Real>> = A.iter().map(|row| row.iter().copied().map(r).collect()).collect();
    let b5: Vec<Real> = B5.iter().copied().map(r).collect();
    let e: Vec<Real> = B5.iter().zip(B4.iter()).map(|(&p, &q)| r(p) - r(q)).collect();
    let dim = y0.len();
    let span = c1 - c0;
    let dir = if span.is_sign_negative() { -1.0 } else { 1.0 };
    let floor = ctx.tol();
    let mut t = c0.clone();
    let mut y = y0.to_vec();
    let mut f0 = field(&t, &y)?;
    let mut path = OdePath { ts: vec![t.clone()], ys: vec![y.clone()], fs: vec![f0.clone()], rejected: 0 };
    if span.is_zero() {
        return Ok(path);
    }
    let mut h = (span.abs() * 0.01).min(ctx.real(tol.powf(0.2) * 0.1)) * dir;
    loop {
        let remaining = c1 - &t;
        if remaining.abs() <= floor.clone() * c1.abs().max(ctx.one()) {
            break;
        }
        let mut last = false;
        if (&h - &remaining).signum() * dir >= 0.0 {
            h = remaining.clone();
            last = true;
        }
        if h.abs() < floor {
            return Err(Error::StepUnderflow(t.to_f64()));
        }
        let mut k: Vec<Vec<Real>> = vec![f0.clone()];
        let mut stage_err = None;
        for s in 1..7 {
            let ys: Vec<Real> = (0..dim)
                .map(|i| {
                    let mut acc = y[i].clone();
                    for (j, aij) in a[s].iter().enumerate() {
                        if !aij.is_zero() {
                            acc += aij * &h * &k[j][i];
                        }
                    }
                    acc
                })
                .collect();
            match field(&(&t + &(&c[s] * &h)), &ys) {
                Ok(v) => k.push(v),
                Err(err) => {
                    stage_err = Some(err);
                    break;
                }
            }
        }
        if stage_err.is_some() {
            h *= 0.25;
            path.rejected += 1;
            continue;
        }
        let y_new: Vec<Real> = (0..dim)
            .map(|i| {
                let mut acc = y[i].clone();
                for (j, bj) in b5.iter().enumerate() {
                    if !bj.is_zero() {
                        acc += bj * &h * &k[j][i];
                    }
                }
                acc
            })
            .collect();
        let mut err = 0.0f64;
        for i in 0..dim {
            let mut ei = ctx.zero();
            for (j, ej) in e.iter().enumerate() {
                if !ej.is_zero() {
                    ei += ej * &h * &k[j][i];
                }
            }
            let sc = 1.0 + y[i].abs().to_f64().max(y_new[i].abs().to_f64());
            err = err.max(ei.abs().to_f64() / sc);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0) };
        if err <= tol {
            t = if last { c1.clone() } else { &t + &h };
            y = y_new;
            f0 = k.pop().expect("seven stages");
            path.ts.push(t.clone());
            path.ys.push(y.clone());
            path.fs.push(f0.clone());
            if last {
                break;
            }
        } else {
            path.rejected += 1;
        }
        h *= factor;
    }
    Ok(path)
}
