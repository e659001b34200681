pub mod analysis;
pub mod bayes;
pub mod cli;
pub mod data;
pub mod error;
pub(crate) mod fmt;
pub mod gof;
pub mod io;
pub mod jpc;
pub mod logconcave;
pub mod mle;
pub(crate) mod optimize;
pub(crate) mod powersum;
pub mod rng;
pub mod study;

pub use error::{Error, Result};
