use num_rational::BigRational;
use num_traits::Zero;

use crate::curvegeom::CurveProblem;
use crate::error::{Error, Result};

use super::intersection::{horizontal_intersection, MarkedPoint};
use super::model::{CuspPrime, Fibre, RegularModel};

/// The vertical Q-divisor Φ_q(G) = Σ φ_C·C over one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionDivisor {
    pub prime: u64,
    pub coeffs: Vec<BigRational>,
}

impl CorrectionDivisor {
    pub fn zero(prime: u64, n: usize) -> Self {
        CorrectionDivisor { prime, coeffs: vec![BigRational::zero(); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Φ + c·𝒳_q.
    pub fn add_fibre_multiple(&self, fibre: &Fibre, c: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().zip(&fibre.multiplicities).map(|(a, m)| a + c * m).collect();
        CorrectionDivisor { prime: self.prime, coeffs }
    }

    /// (𝒢 + Φ)·C for every component C, given 𝒢's incidence vector.
    pub fn psi_intersections(&self, fibre: &Fibre, incidence: &[BigRational]) -> Result<Vec<BigRational>> {
        let m = fibre.matrix.mul_vec(&self.coeffs)?;
        Ok(m.iter().zip(incidence).map(|(a, b)| a + b).collect())
    }

    /// i_λ(Φ, 𝒬̃).
    pub fn cusp_intersection(&self, model: &RegularModel, lambda: &CuspPrime) -> Result<BigRational> {
        if lambda.over_prime != self.prime || self.is_zero() {
            return Ok(BigRational::zero());
        }
        let mut acc = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * model.component_intersection(lambda, k)?;
            }
        }
        Ok(acc)
    }
}

/// Φ = −M⁺·incidence, shifted by a multiple of the fibre so that the
/// coefficient on `base` is zero.
pub fn correction_from_incidence(fibre: &Fibre, incidence: &[BigRational], base: Option<usize>) -> Result<CorrectionDivisor> {
    if incidence.len() != fibre.len() {
        return Err(Error::DimensionMismatch(format!(
            "incidence has {} entries, fibre over {} has {} components",
            incidence.len(),
            fibre.prime,
            fibre.len()
        )));
    }
    if fibre.len() == 1 {
        return Ok(CorrectionDivisor::zero(fibre.prime, 1));
    }
    let mut phi: Vec<BigRational> = fibre.pinv.mul_vec(incidence)?.into_iter().map(|x| -x).collect();
    if let Some(k) = base {
        let s = &phi[k] / &fibre.multiplicities[k];
        for (a, m) in phi.iter_mut().zip(&fibre.multiplicities) {
            *a -= &s * m;
        }
    }
    let out = CorrectionDivisor { prime: fibre.prime, coeffs: phi };
    if out.psi_intersections(fibre, incidence)?.iter().any(|x| !x.is_zero()) {
        return Err(Error::Invalid(format!(
            "incidence over {} meets the whole fibre nontrivially; the divisor does not have degree zero",
            fibre.prime
        )));
    }
    Ok(out)
}

/// Φ_q(G) for G = Σ n_i·P_i, from the ingested incidence vectors.
pub fn correction_divisor(model: &RegularModel, q: u64, divisor: &[(i64, &str)]) -> Result<CorrectionDivisor> {
    let fibre = model.fibre(q);
    if fibre.len() == 1 {
        return Ok(CorrectionDivisor::zero(q, 1));
    }
    let mut inc = vec![BigRational::zero(); fibre.len()];
    for (n, id) in divisor {
        let v = fibre.incidence(id)?;
        for (a, b) in inc.iter_mut().zip(v) {
            *a += BigRational::from_integer((*n).into()) * b;
        }
    }
    let base = fibre.component_of(&model.base_object)?;
    correction_from_incidence(&fibre, &inc, Some(base))
}

/// Φ_q of the vertical difference (component `to`) − (component `from`),
/// as it enters the Selmer target.
pub fn component_correction(model: &RegularModel, q: u64, from: usize, to: usize) -> Result<CorrectionDivisor> {
    let fibre = model.fibre(q);
    if fibre.len() == 1 || from == to {
        return Ok(CorrectionDivisor::zero(q, fibre.len()));
    }
    let mut inc = fibre.unit(to);
    inc[from] -= BigRational::from_integer(1.into());
    let base = fibre.component_of(&model.base_object)?;
    correction_from_incidence(&fibre, &inc, Some(base))
}

/// i_λ(Ψ_q(G), 𝒬̃) = Σ n_i·i_λ(𝒫_i, 𝒬̃) + i_λ(Φ_q(G), 𝒬̃), q below λ.
pub fn psi_intersection(
    problem: &CurveProblem,
    model: &RegularModel,
    divisor: &[(i64, MarkedPoint)],
    lambda: &CuspPrime,
) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (n, pt) in divisor {
        let h = horizontal_intersection(problem, model, pt, lambda)?;
        acc += BigRational::from_integer((*n).into()) * h;
    }
    let ids: Vec<(i64, &str)> = divisor.iter().map(|(n, pt)| (*n, pt.id.as_str())).collect();
    let phi = correction_divisor(model, lambda.over_prime, &ids)?;
    Ok(acc + phi.cusp_intersection(model, lambda)?)
}
