//! Learning, sampling, evaluating and covering sums of independent integer
//! random variables (k-SIIRVs).

pub mod calibration;
pub mod cover;
pub mod dist;
pub mod error;
pub mod fourier;
pub mod hypothesis;
pub mod io;
pub mod learn;
pub mod optimal;
pub mod rng;
pub mod run;
pub mod source;

pub use error::{Error, Result};
