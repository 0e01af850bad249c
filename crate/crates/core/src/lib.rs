// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod initial;
pub mod ode;
pub mod quadrature;
pub mod resonance;
pub mod runner;
pub mod spectral;
pub mod unknowns;
pub mod weights;

pub use error::{Error, Result};
