//! Exact and numeric tools for generalized free fields with rational correlators: crossing
//! symmetric 4-point functions, their conformal partial waves, free-field Wick correlators,
//! bilocal symmetrization and thermal expectation values.

pub mod config;
pub mod error;
pub mod exact;
pub mod fourpoint;
pub mod freefield;
pub mod kinematics;
pub mod partialwave;
pub mod symmetrize;
pub mod thermal;
pub mod verify;

pub use error::{GciError, Result};
