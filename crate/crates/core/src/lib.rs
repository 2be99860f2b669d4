pub mod algebra;
pub mod bimodule;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod fixtures;
pub mod frobanalysis;
pub mod module;
pub mod spectrum;

pub use error::{FrobError, Result};
