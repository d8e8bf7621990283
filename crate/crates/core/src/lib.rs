//! Jets of the modular j-function, the SL2(Z) transform algebra on polynomials
//! in (z, j, j', j''), and certified zero location for F(z, j(z), j'(z), j''(z)).

pub mod density;
pub mod error;
pub mod growth;
pub mod locate;
pub mod moebius;
pub mod numeric;
pub mod orders;
pub mod par;
pub mod polyalg;
pub mod qseries;
pub mod repro;

pub use error::{Error, Result};
pub use moebius::Moebius;
pub use numeric::UHPoint;
pub use polyalg::{CoefScalar, MultiPoly, Var};
