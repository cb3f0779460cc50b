//! Algebraic attacks on nonlinear filter generators.

pub mod anf;
pub mod annihilator;
pub mod cipher;
pub mod error;
pub mod estimator;
pub mod gf2;
pub mod workbench;
pub mod xl;

pub use error::{Error, Result};
