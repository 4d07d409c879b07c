//! Photon-transfer gain estimation: special functions, estimator moments,
//! optimal sample sizes and a simulated data-collection pipeline.

pub mod error;
pub mod estimator;
pub mod fracsum;
pub mod gain;
pub mod optsize;
pub mod rng;
pub mod simpipe;
pub mod specfun;

pub use error::{Error, Result};
