use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::scalar::{Field, Real};

/// Dense row-major matrix.
#[derive(Clone, Debug)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Matrix { rows, cols, data: vec![T::zero_with(prec); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let prec = x.first().map_or(64, Field::precision);
        (0..self.rows).map(|i| (0..self.cols).fold(T::zero_with(prec), |acc, j| acc.add_ref(&self.get(i, j).mul_ref(&x[j])))).collect()
    }

    pub fn norm_inf(&self, prec: u32) -> Real {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Real::zero(prec), |acc, j| acc + self.get(i, j).modulus()))
            .fold(Real::zero(prec), Real::max)
    }
}

pub fn vec_norm_inf<T: Field>(v: &[T], prec: u32) -> Real {
    v.iter().map(Field::modulus).fold(Real::zero(prec), Real::max)
}

fn eliminate<T: Field>(a: &Matrix<T>, b: &[T], ctx: PrecisionCtx, full: bool) -> Result<Vec<T>> {
    let n = a.rows;
    let mut m = a.data.clone();
    let mut rhs = b.to_vec();
    let mut colperm: Vec<usize> = (0..n).collect();
    let scale = a.norm_inf(ctx.bits).max(Real::pow2(-(ctx.bits as i32), ctx.bits));
    let floor = ctx.eps() * &scale;
    for k in 0..n {
        let (mut pr, mut pc) = (k, k);
        let mut best = m[k * n + k].modulus();
        let cols = if full { k..n } else { k..k + 1 };
        for j in cols {
            for i in k..n {
                let v = m[i * n + j].modulus();
                if v > best {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        }
        if best <= floor {
            return Err(Error::Singular(format!("pivot {} at column {k}", best.to_sci(6))));
        }
        if pr != k {
            for j in 0..n {
                m.swap(k * n + j, pr * n + j);
            }
            rhs.swap(k, pr);
        }
        if pc != k {
            for i in 0..n {
                m.swap(i * n + k, i * n + pc);
            }
            colperm.swap(k, pc);
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let f = m[i * n + k].div_ref(&pivot);
            if f.modulus().is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = m[i * n + j].sub_ref(&f.mul_ref(&m[k * n + j]));
                m[i * n + j] = v;
            }
            m[i * n + k] = T::zero_with(ctx.bits);
            rhs[i] = rhs[i].sub_ref(&f.mul_ref(&rhs[k]));
        }
    }
    let mut y = vec![T::zero_with(ctx.bits); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            acc = acc.sub_ref(&m[i * n + j].mul_ref(&y[j]));
        }
        y[i] = acc.div_ref(&m[i * n + i]);
    }
    let mut x = vec![T::zero_with(ctx.bits); n];
    for (k, &c) in colperm.iter().enumerate() {
        x[c] = y[k].clone();
    }
    Ok(x)
}

/// Solves A·x = b by Gaussian elimination with partial pivoting, retrying
/// with full pivoting when the residual check fails.
pub fn solve_linear<T: Field>(a: &Matrix<T>, b: &[T], ctx: PrecisionCtx) -> Result<Vec<T>> {
    if a.rows != a.cols || a.rows != b.len() {
        return Err(Error::InvalidInput(format!("system shape {}x{} with rhs {}", a.rows, a.cols, b.len())));
    }
    if a.rows == 0 {
        return Ok(Vec::new());
    }
    let bound = |x: &[T]| ctx.tol() * a.norm_inf(ctx.bits) * vec_norm_inf(x, ctx.bits);
    let residual = |x: &[T]| {
        let ax = a.mul_vec(x);
        ax.iter().zip(b).map(|(u, v)| u.sub_ref(v).modulus()).fold(Real::zero(ctx.bits), Real::max)
    };
    match eliminate(a, b, ctx, false) {
        Ok(x) if residual(&x) <= bound(&x) => Ok(x),
        _ => {
            let x = eliminate(a, b, ctx, true)?;
            if residual(&x) <= bound(&x) {
                Ok(x)
            } else {
                Err(Error::Singular("residual check failed after full pivoting".into()))
            }
        }
    }
}
