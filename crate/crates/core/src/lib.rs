//! Exact decision procedures and constructions for one-dimensional
//! semilinear topological spaces over the rationals.

pub mod error;
pub mod exactline;
pub mod defset;
pub(crate) mod arrange;
pub mod space;

pub use error::{Error, Result};
pub mod cli;
pub mod curves;
pub mod classify;
pub mod construct;
pub mod affinemetric;
