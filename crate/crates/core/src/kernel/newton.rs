use crate::error::{Error, Result};
use crate::kernel::linalg::{solve_linear, vec_norm_inf, Matrix};
use crate::precision::PrecisionCtx;
use crate::scalar::Real;

const MAX_HALVINGS: usize = 30;

/// Central finite-difference Jacobian with step 2^(−bits/3)·max(1, |x_j|).
pub fn fd_jacobian<F>(f: &F, x: &[Real], ctx: PrecisionCtx) -> Result<Matrix<Real>>
where
    F: Fn(&[Real]) -> Result<Vec<Real>>,
{
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let h = ctx.third() * x[j].abs().max(ctx.one());
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += &h;
        xm[j] -= &h;
        let fp = f(&xp)?;
        let fm = f(&xm)?;
        let h2 = &h * 2.0;
        cols.push(fp.iter().zip(&fm).map(|(a, b)| (a - b) / &h2).collect::<Vec<_>>());
    }
    let m = cols.first().map_or(0, Vec::len);
    let mut jac = Matrix::zeros(m, n, ctx.bits);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            jac.set(i, j, v);
        }
    }
    Ok(jac)
}

/// Damped Newton iteration for a square system F(x) = 0.
///
/// The full step is halved (at most 30 times) until the residual decreases.
pub fn newton_solve<F>(f: F, x0: &[Real], tol: &Real, max_iter: usize, ctx: PrecisionCtx) -> Result<Vec<Real>>
where
    F: Fn(&[Real]) -> Result<Vec<Real>>,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x)?;
    if fx.len() != x.len() {
        return Err(Error::InvalidInput(format!("newton_solve: {} equations, {} unknowns", fx.len(), x.len())));
    }
    let mut norm = vec_norm_inf(&fx, ctx.bits);
    for _ in 0..max_iter {
        if norm <= *tol {
            return Ok(x);
        }
        let jac = fd_jacobian(&f, &x, ctx)?;
        let rhs: Vec<Real> = fx.iter().map(|v| -v).collect();
        let dx = solve_linear(&jac, &rhs, ctx)?;
        let mut lambda = ctx.one();
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<Real> = x.iter().zip(&dx).map(|(a, d)| a + &(d * &lambda)).collect();
            if let Ok(ft) = f(&trial) {
                let nt = vec_norm_inf(&ft, ctx.bits);
                if nt.is_finite() && nt < norm {
                    x = trial;
                    fx = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NonConvergence(format!("newton_solve: residual stalled at {}", norm.to_sci(6))));
        }
    }
    if norm <= *tol {
        Ok(x)
    } else {
        Err(Error::NonConvergence(format!("newton_solve: {max_iter} iterations, residual {}", norm.to_sci(6))))
    }
}
