use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::curvegeom::CurveProblem;
use crate::error::{Error, Result};

use super::intersection::{horizontal_intersection, MarkedPoint};
use super::model::RegularModel;

/// Where points of a given type reduce modulo one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LocalChoice {
    /// A component of 𝒳_q^sm ∖ 𝒟_q.
    Component { id: String },
    /// The F_q-point of 𝒟's fibre cut out by λ (q ∈ S).
    Cuspidal { lambda_id: String },
}

/// An S-integral reduction type. Primes with a single forced choice are
/// left out.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionType {
    pub choices: BTreeMap<u64, LocalChoice>,
}

impl ReductionType {
    /// The cuspidal support C(Σ) = S₀.
    pub fn support(&self) -> Vec<u64> {
        self.cuspidal_part().into_iter().map(|(q, _)| q).collect()
    }

    /// Σ^csp as (q, λ) pairs.
    pub fn cuspidal_part(&self) -> Vec<(u64, String)> {
        self.choices
            .iter()
            .filter_map(|(q, c)| match c {
                LocalChoice::Cuspidal { lambda_id } => Some((*q, lambda_id.clone())),
                LocalChoice::Component { .. } => None,
            })
            .collect()
    }

    pub fn choice(&self, q: u64) -> Option<&LocalChoice> {
        self.choices.get(&q)
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.choices.is_empty() {
            return f.write_str("(forced)");
        }
        let parts: Vec<String> = self
            .choices
            .iter()
            .map(|(q, c)| match c {
                LocalChoice::Component { id } => format!("{q}:{id}"),
                LocalChoice::Cuspidal { lambda_id } => format!("{q}:cusp {lambda_id}"),
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Every S-integral reduction type, in lexicographic order of the choices.
pub fn enumerate_reduction_types(model: &RegularModel, s: &[u64]) -> Result<Vec<ReductionType>> {
    for &q in s {
        if !model.transversal.contains(&q) {
            return Err(Error::NotTransversal(q));
        }
        for c in 0..model.cusp_count() {
            if model.primes_over(c, q).iter().any(|l| l.f == 1 && l.e != 1) {
                return Err(Error::NotTransversal(q));
            }
        }
        model.require_primes_over(q)?;
    }
    let primes: BTreeSet<u64> = model.fibres.keys().copied().chain(s.iter().copied()).collect();
    let mut slots: Vec<(u64, Vec<LocalChoice>)> = Vec::new();
    for q in primes {
        let fibre = model.fibre(q);
        let mut options: Vec<LocalChoice> = (0..fibre.len())
            .filter(|&k| fibre.has_points[k] && fibre.multiplicities[k].is_one())
            .map(|k| LocalChoice::Component { id: fibre.ids[k].clone() })
            .collect();
        if s.contains(&q) {
            for c in 0..model.cusp_count() {
                for l in model.primes_over(c, q) {
                    if l.f == 1 {
                        options.push(LocalChoice::Cuspidal { lambda_id: l.lambda_id.clone() });
                    }
                }
            }
        }
        if options.is_empty() {
            // no integral points of any type reduce here
            return Ok(vec![]);
        }
        let forced = options.len() == 1 && matches!(options[0], LocalChoice::Component { .. });
        if !forced {
            slots.push((q, options));
        }
    }
    let mut out = vec![ReductionType::default()];
    for (q, options) in slots {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for t in &out {
            for o in &options {
                let mut u = t.clone();
                u.choices.insert(q, o.clone());
                next.push(u);
            }
        }
        out = next;
    }
    Ok(out)
}

/// The reduction type of a known point, from its incidence vectors over the
/// listed fibres and its contact with the cusp closures over S.
pub fn reduction_type_of(
    problem: &CurveProblem,
    model: &RegularModel,
    s: &[u64],
    pt: &MarkedPoint,
) -> Result<ReductionType> {
    let all = enumerate_reduction_types(model, s)?;
    let mut choices = BTreeMap::new();
    let primes: BTreeSet<u64> = all.iter().flat_map(|t| t.choices.keys().copied()).collect();
    for q in primes {
        let mut cusp = None;
        if s.contains(&q) {
            for l in model.primes.iter().filter(|l| l.over_prime == q && l.f == 1) {
                if horizontal_intersection(problem, model, pt, l)?.is_positive() {
                    cusp = Some(l.lambda_id.clone());
                }
            }
        }
        let choice = match cusp {
            Some(lambda_id) => LocalChoice::Cuspidal { lambda_id },
            None => {
                let fibre = model.fibre(q);
                LocalChoice::Component { id: fibre.ids[fibre.component_of(&pt.id)?].clone() }
            }
        };
        choices.insert(q, choice);
    }
    let t = ReductionType { choices };
    if !all.contains(&t) {
        return Err(Error::Invalid(format!("{} reduces to no admissible type", pt.id)));
    }
    Ok(t)
}
