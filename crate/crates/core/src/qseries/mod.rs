//! Fourier expansions of j and high-precision evaluation of its jet.

mod eval;
mod series;
mod table;

pub use eval::{eval_jet, eval_jppp, eval_poly_in_j, eval_poly_with_jet, Jet, EVAL_FLOOR, GUARD_BITS};
pub use series::{
    default_qmax, exact_jet_series, exact_jet_series_with, jet_series, Coeff, Domain, JetSeries, QSeries,
};
pub use table::{shared as shared_table, FourierTable, CACHE_DIR_ENV, DEFAULT_TERMS, MAX_TERMS};
