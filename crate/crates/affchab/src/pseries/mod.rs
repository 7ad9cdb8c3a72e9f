//! Truncated power series over Q_p and root isolation on Z_p.

mod series;
mod strassmann;

pub use series::{Tail, TruncatedSeries};
pub use strassmann::{strassmann_bound, strassmann_roots, Root, RootIsolation};
