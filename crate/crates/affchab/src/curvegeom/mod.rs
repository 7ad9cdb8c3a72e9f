//! Curve families, cusps and their residues, residue discs and local
//! parametrizations.

mod cover;
mod problem;

pub use cover::{eval_poly_on_series, power_series, series_order, CyclicCover, DiscKind, LocalParameter, Point, ResidueDisc};
pub use problem::{
    admissible_primes, differential_basis, embedded_residue, prime_obstruction, residue_at_cusp, residue_sum,
    CurveProblem, Cusp, Family, LogDifferential, RationalPoint,
};
