//! Numerical substrate: polynomials, quadrature, dense solves, Newton,
//! adaptive Runge–Kutta and simultaneous root iteration.

pub mod linalg;
pub mod newton;
pub mod ode;
pub mod poly;
pub mod quadrature;

pub use linalg::{solve_linear, Matrix};
pub use newton::newton_solve;
pub use ode::{ode_solve, OdePath};
pub use poly::{poly_roots, Poly};
pub use quadrature::{
    gauss_legendre, integrate_closed_contour, integrate_endpoint_singular, integrate_interval, integrate_interval_tol, tanh_sinh, Circle,
    ClosedPath, QuadratureRule, Substitution, TanhSinhRule,
};
