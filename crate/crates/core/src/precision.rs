use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_GUARD_BITS: u32 = 16;

/// Working precision shared by every multiprecision value of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    pub bits: u32,
    pub guard_bits: u32,
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        PrecisionCtx { bits: DEFAULT_BITS, guard_bits: DEFAULT_GUARD_BITS }
    }
}

impl PrecisionCtx {
    pub fn new(bits: u32) -> Result<Self> {
        Self::with_guard(bits, DEFAULT_GUARD_BITS)
    }

    pub fn with_guard(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidInput(format!("precision {bits} bits is below the 64-bit floor")));
        }
        if guard_bits >= bits / 2 {
            return Err(Error::InvalidInput(format!("guard bits {guard_bits} too large for {bits} bits")));
        }
        Ok(PrecisionCtx { bits, guard_bits })
    }

    pub fn doubled(&self) -> Self {
        PrecisionCtx { bits: self.bits * 2, guard_bits: self.guard_bits }
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.bits)
    }

    pub fn one(&self) -> Real {
        Real::one(self.bits)
    }

    pub fn real(&self, v: f64) -> Real {
        Real::from_f64(v, self.bits)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(v, self.bits)
    }

    pub fn ratio(&self, p: i64, q: i64) -> Real {
        Real::ratio(p, q, self.bits)
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(s, self.bits)
    }

    pub fn pi(&self) -> Real {
        Real::pi(self.bits)
    }

    pub fn czero(&self) -> Complex {
        Complex::zero(self.bits)
    }

    pub fn cone(&self) -> Complex {
        Complex::one(self.bits)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::from_f64(re, im, self.bits)
    }

    /// 2^(−bits+guard): pivot and underflow floor.
    pub fn eps(&self) -> Real {
        Real::pow2(-(self.bits as i32) + self.guard_bits as i32, self.bits)
    }

    /// 2^(−bits/2): default convergence tolerance.
    pub fn tol(&self) -> Real {
        Real::pow2(-(self.bits as i32) / 2, self.bits)
    }

    /// 2^(−bits/3): finite-difference step and coincidence threshold.
    pub fn third(&self) -> Real {
        Real::pow2(-(self.bits as i32) / 3, self.bits)
    }

    pub fn tol_f64(&self) -> f64 {
        2f64.powi(-(self.bits as i32) / 2)
    }
}
