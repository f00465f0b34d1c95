pub mod analytic;
pub mod cli;
pub mod cluster;
pub mod entropy;
pub mod error;
pub mod gp;
pub mod numerics;
pub mod scaling;

pub use error::{Error, Result};
