//! Exact fixed-point calculus for torus actions with isolated fixed points:
//! formal characters, polarized geometric series, flow filtrations, graded
//! Morse-type series, and per-weight Cech spectral sequences for toric and
//! flag geometries.
//!
//! All arithmetic is integer or rational exact; there is no floating point
//! anywhere in the crate.

pub mod cech;
pub mod character;
pub mod error;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod fixed_point;
pub mod flag;
pub mod flow;
pub mod graded;
pub mod lattice;
pub mod linalg;
pub mod morse;
pub mod rational;
pub mod toric;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
