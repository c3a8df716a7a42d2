//! Operator-based construction of Orr-Sommerfeld modes for symmetric channel
//! flows, together with an independent Chebyshev collocation eigensolver.

pub mod airy;
pub mod cli;
pub mod collocation;
pub mod critical_layer;
pub mod dispersion;
pub mod error;
pub mod flow;
pub mod jet;
pub mod mesh;
pub mod operators;
pub mod orr_modes;
pub mod profiles;
pub mod rayleigh;
pub mod scaled;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
