//! Relative pressure of factor codes between shifts of finite type.
//!
//! The crate compares two growth rates attached to a one-block factor code
//! `π: X -> Y` from a shift of finite type and a locally constant potential
//! `f`: the relative pressure over genuine preimage points of `y` and the
//! finite-range version summing over all preimage words of the windows of
//! `y`. It computes both at finite `n` by transfer recursions, exactly at
//! periodic points through spectral radii, and empirically on Markov-typical
//! points.

pub mod error;
pub mod experiments;
pub mod format;
pub mod potential;
pub mod pressure;
pub mod symbolic;
pub mod system_file;

pub use error::{Error, Result};
