//! File formats, experiment drivers and the `diffpart` command line on top
//! of [`diffpart_core`].

pub mod cli;
pub mod config;
mod error;
pub mod experiments;
pub mod io;
pub mod report;

pub use error::{Error, Result};
