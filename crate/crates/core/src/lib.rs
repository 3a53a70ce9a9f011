//! Spectrum of the PT-symmetric Hamiltonian `H = p^2 + x^2 (ix)^eps`.

pub mod asymptotics;
pub mod classify;
pub mod contour;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod shooting;
pub mod sweep;
pub mod wedges;

pub use error::{Error, Result};
