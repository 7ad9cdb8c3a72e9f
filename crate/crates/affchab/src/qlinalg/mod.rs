//! Exact linear algebra over Q, polynomial and number-field arithmetic, and
//! precision-aware linear algebra over Q_p.

pub mod fp;
mod numfield;
mod padic_matrix;
mod qpoly;
mod rational;

pub use numfield::NumberField;
pub use padic_matrix::{normalize, Kernel, PadicMatrix, RANK_GUARD};
pub use qpoly::{parse_rational, rat, QPoly};
pub use rational::RationalMatrix;
