//! Shared fixtures for the kernel benchmarks.

use angelesco::curve::{CurveParams, CurveSolver, Geometry};
use angelesco::io::lebesgue_weights;
use angelesco::oracle::MopOracle;
use angelesco::weight::WeightSpec;
use angelesco::{Complex, PrecisionCtx};

pub fn ctx() -> PrecisionCtx {
    PrecisionCtx::default()
}

pub fn solver() -> CurveSolver {
    CurveSolver::new(Geometry::g0(ctx()), ctx())
}

pub fn weights() -> (WeightSpec, WeightSpec) {
    lebesgue_weights(&Geometry::g0(ctx()), ctx()).expect("G0 weights")
}

/// A fresh oracle, so that nothing is served from the memo cache.
pub fn cold_oracle() -> MopOracle {
    MopOracle::new(weights(), ctx())
}

pub fn params(c: f64) -> CurveParams {
    let s = solver();
    s.solve(&s.ctx.real(c)).expect("curve parameters")
}

/// Roots spread over a disc, used to build test polynomials.
pub fn spread_roots(n: usize) -> Vec<Complex> {
    let ctx = ctx();
    (0..n)
        .map(|k| {
            let t = k as f64 * 2.399963229728653;
            let r = (k as f64 + 0.5).sqrt() / (n as f64).sqrt();
            ctx.complex(r * t.cos(), r * t.sin())
        })
        .collect()
}
