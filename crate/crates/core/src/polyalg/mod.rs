//! Exact polynomial algebra over Q(i)[pi, 1/pi] and the SL2(Z) transforms.

mod parse;
mod poly;
mod scalar;
mod transform;

pub use parse::parse_poly;
pub use poly::{CompiledPoly, Mono, MultiPoly, Var, NVARS};
pub use scalar::{CoefScalar, GaussRat};
pub use transform::*;
