#[cfg(feature = "cli")]
pub mod cli;
pub mod complexity;
pub mod diophantine;
mod error;
pub mod gauge;
pub mod measure;
pub mod numeric;
pub mod tree;

pub use error::{Error, Result};
