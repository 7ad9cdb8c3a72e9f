//! S-integral points on affine curves by the Chabauty–Coleman method with
//! logarithmic differentials.
//!
//! The pipeline: ingest a regular-model description and generators, build the
//! matrix of integrals and logarithms, take its kernel to get an annihilating
//! differential, and cut out the p-adic locus disc by disc.

pub mod error;
pub mod padic;
pub mod pseries;
pub mod qlinalg;
pub mod curvegeom;
pub mod coleman;
pub mod arithmodel;
pub mod chabauty;
pub mod cli;

pub use error::{Error, Result};
