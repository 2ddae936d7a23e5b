pub mod abc;
pub mod error;
pub mod experiment;
mod linalg;
pub mod metrics;
pub mod models;
pub mod oracle;
pub mod pipeline;
pub mod postprocess;
pub mod quadrature;
pub mod regression;
pub mod rng;
pub mod special;
pub mod summaries;

pub use error::{Error, Result};
