pub mod curve;
pub mod error;
pub mod flow;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod precision;
pub mod scalar;
pub mod surface;
pub mod szego;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use precision::PrecisionCtx;
pub use scalar::{Complex, Real};
