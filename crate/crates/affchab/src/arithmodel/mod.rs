//! Regular-model data (ingested, never computed), correction divisors,
//! intersections with cusp closures, reduction types and Selmer targets.

mod correction;
mod intersection;
mod model;
mod reduction;
mod selmer;

pub use correction::{component_correction, correction_divisor, correction_from_incidence, psi_intersection, CorrectionDivisor};
pub use intersection::{contact_primes, good_reduction_at, horizontal_intersection, require_contact_primes, MarkedPoint};
pub use model::{
    ComponentSpec, CuspPrime, CuspPrimeSpec, Fibre, FibreSpec, GeneratorSpec, OverrideSpec, RegularModel, RegularModelData,
    RhoSpec, SMOOTH,
};
pub use reduction::{enumerate_reduction_types, reduction_type_of, LocalChoice, ReductionType};
pub use selmer::{selmer_target, SelmerTarget};
