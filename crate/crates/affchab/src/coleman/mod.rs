//! p-adic integration of logarithmic differentials.

mod frobenius;
mod hyperelliptic;
mod integrator;
mod superelliptic;

pub use frobenius::{ExactPart, FrobeniusData};
pub use hyperelliptic::HyperellipticIntegrator;
pub use integrator::{residue_theorem_check, Certificate, CurveIntegrator, IntegralValue, Method};
pub use superelliptic::SuperellipticIntegrator;
