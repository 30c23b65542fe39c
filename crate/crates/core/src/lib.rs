//! Exact arithmetic for chains of diagonal quadratic forms and certified
//! symbol-length decompositions in the 2-primary Brauer group of finite and
//! p-adic fields.

pub mod brauer;
pub mod chain;
pub mod error;
pub mod field;
pub mod fuzz;
pub mod generate;
pub mod pipeline;
pub mod qform;
pub mod verify;

pub use error::{Error, Result};
