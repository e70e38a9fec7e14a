//! American option pricing by semi-infinite linear programming.

pub mod basis;
pub mod cli;
pub mod error;
pub mod lowerbound;
pub mod lsip;
pub mod models;
pub mod numerics;
pub mod pricer;

pub use error::{Error, Result};
