use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::curvegeom::CurveProblem;
use crate::error::Result;

use super::correction::component_correction;
use super::intersection::{horizontal_intersection, require_contact_primes, MarkedPoint};
use super::model::RegularModel;
use super::reduction::{LocalChoice, ReductionType};

/// The affine target b + U of the D-intersection map for one type,
/// as coefficient maps on the listed primes λ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelmerTarget {
    pub b: BTreeMap<String, BigRational>,
    pub u: Vec<BTreeMap<String, BigRational>>,
}

impl SelmerTarget {
    pub fn b_is_zero(&self) -> bool {
        self.b.values().all(|x| x.is_zero())
    }
}

/// b_λ = −i_λ(𝒫₀, 𝒬̃) + i_λ(Φ_q(cpt(Σ_q) − cpt_q(P₀)), 𝒬̃) and u_q = [Σ_q].
pub fn selmer_target(problem: &CurveProblem, model: &RegularModel, base: &MarkedPoint, sigma: &ReductionType) -> Result<SelmerTarget> {
    require_contact_primes(problem, model, &[base])?;
    let mut b = BTreeMap::new();
    for lambda in &model.primes {
        let q = lambda.over_prime;
        let mut v = -horizontal_intersection(problem, model, base, lambda)?;
        let fibre = model.fibre(q);
        if fibre.len() > 1 {
            let to = match sigma.choice(q) {
                Some(LocalChoice::Component { id }) => Some(fibre.index_of(id)?),
                Some(LocalChoice::Cuspidal { lambda_id }) => Some(model.cusp_component(model.prime(lambda_id)?)?),
                None => None,
            };
            if let Some(to) = to {
                let from = fibre.component_of(&model.base_object)?;
                v += component_correction(model, q, from, to)?.cusp_intersection(model, lambda)?;
            }
        }
        b.insert(lambda.lambda_id.clone(), v);
    }
    let u = sigma
        .cuspidal_part()
        .into_iter()
        .map(|(_, id)| BTreeMap::from([(id, BigRational::one())]))
        .collect();
    Ok(SelmerTarget { b, u })
}
