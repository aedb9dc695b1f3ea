pub mod catalog;
pub mod construct;
pub mod error;
pub mod factorize;
pub mod logsig;
pub mod permcore;
pub mod pgm;

pub use error::{Error, Result};
