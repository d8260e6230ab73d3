//! Counting rank-`r` complex vector bundles on `CP^n` at a prime, through
//! EO-theory of stunted projective spaces.

pub mod arith;
pub mod comodule;
pub mod counts;
pub mod detection;
pub mod eo;
pub mod error;
pub mod exec;
mod fp;
pub mod group;
pub mod verify;

pub use arith::Prime;
pub use error::{Error, Result};
pub use exec::Execution;
pub use group::FinitePGroup;
