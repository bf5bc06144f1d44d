pub mod broken_line;
pub mod cli;
pub mod discrete_operator;
pub mod error;
pub mod fit;
pub mod model_operators;
pub mod probes;
pub mod quadrature;
pub mod resolvent;
pub mod riesz_kernel;
pub mod specfun;

pub use error::{Error, Result};
