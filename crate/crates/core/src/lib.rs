pub mod analytic;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod error;
pub mod montecarlo;

pub use error::{Error, Result};
