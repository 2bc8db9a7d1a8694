//! Exact arithmetic substrate.

pub mod gauss;
pub mod mpoly;
pub mod qseries;
pub mod rat;
pub mod ratfn;
pub mod series;

pub use gauss::{Gauss, GaussPoly, GaussRat};
pub use mpoly::MPoly;
pub use qseries::{halfperiod_substitute, qseries_eval, QSeries};
pub use rat::{fmt_rat, parse_rat, rat, ri, Rat};
pub use ratfn::{ratfn_eq, RatFn};
pub use series::{expand_to_chiral, series2_div_antisym, symmetric_reduce, Series1, Series2};
