pub mod arith;
pub mod atlas;
pub mod bf;
pub mod error;
pub mod geniso;
pub mod matrix;
pub mod random;
pub mod report;
pub mod selftest;
pub mod strata;

pub use error::{Error, Result};
