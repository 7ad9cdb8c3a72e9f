use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::curvegeom::{CurveProblem, Family, RationalPoint};
use crate::error::{Error, Result};
use crate::padic::rational_valuation;
use crate::qlinalg::{fp, QPoly};

use super::model::{CuspPrime, RegularModel};

/// An affine point with the id it carries in the incidence tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub id: String,
    pub point: RationalPoint,
}

impl MarkedPoint {
    pub fn new(id: impl Into<String>, point: RationalPoint) -> Self {
        MarkedPoint { id: id.into(), point }
    }
}

/// Whether the plane model has good reduction at ℓ.
pub fn good_reduction_at(problem: &CurveProblem, ell: u64) -> bool {
    let Ok(l) = u32::try_from(ell) else { return false };
    match &problem.family {
        Family::Hyperelliptic { f } => {
            if ell == 2 {
                return false;
            }
            let Some(fbar) = f.reduce_mod(l) else { return false };
            fbar.len() as i64 - 1 == f.degree() && fp::gcd(&fbar, &fp::derivative(&fbar, ell), ell).len() <= 1
        }
        Family::Superelliptic { a } => {
            let bad = BigInt::from(3) * a * (a * a - BigInt::from(4));
            !(bad % BigInt::from(ell)).is_zero()
        }
    }
}

fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    let mut m = n.abs().to_u64().ok_or_else(|| Error::Invalid(format!("cannot factor {n}")))?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    Ok(out)
}

/// Primes at which the closure of the point meets some cusp closure on the
/// plane model: exactly those where x is not integral.
pub fn contact_primes(_problem: &CurveProblem, pt: &RationalPoint) -> Result<Vec<u64>> {
    if pt.x.is_zero() {
        return Ok(vec![]);
    }
    prime_factors(pt.x.denom())
}

fn cusp_coordinate(problem: &CurveProblem, cusp: usize) -> Result<QPoly> {
    match &problem.family {
        Family::Superelliptic { .. } => Ok(if cusp == 0 { QPoly::from_ints(&[1]) } else { QPoly::x() }),
        Family::Hyperelliptic { .. } => {
            let s = problem.sqrt_leading().ok_or_else(|| Error::UnsupportedFamily("no cusp coordinate".into()))?;
            let s = BigRational::from_integer(s);
            Ok(QPoly::constant(if cusp == 0 { s } else { -s }))
        }
    }
}

/// i_λ(𝒫, 𝒬̃) for an affine point P and a listed prime λ of its cusp.
///
/// Pinned overrides win. Otherwise the contact order is read from a chart
/// at the cusps, which needs the model to be smooth there: good reduction
/// of the plane model, or a fibre flagged `smooth_at_cusps`.
pub fn horizontal_intersection(
    problem: &CurveProblem,
    model: &RegularModel,
    pt: &MarkedPoint,
    lambda: &CuspPrime,
) -> Result<BigRational> {
    if let Some(v) = model.overrides.get(&(pt.id.clone(), lambda.lambda_id.clone())) {
        return Ok(v.clone());
    }
    let ell = lambda.over_prime;
    let l = ell as u32;
    let x = &pt.point.x;
    if x.is_zero() || rational_valuation(x, l) >= 0 {
        return Ok(BigRational::zero());
    }
    let regular = good_reduction_at(problem, ell) || model.fibres.get(&ell).is_some_and(|f| f.smooth_at_cusps);
    if !regular {
        return Err(Error::NeedsOverride(format!(
            "{} meets the cusps over {ell}, where the model is not flagged smooth",
            pt.id
        )));
    }
    let y = &pt.point.y;
    let v = match &problem.family {
        Family::Hyperelliptic { f } if f.degree() % 2 == 1 => {
            // local parameter x^g/y at the point at infinity
            let g = problem.genus as i32;
            if y.is_zero() {
                return Err(Error::Invalid(format!("{} has y = 0 and non-integral x", pt.id)));
            }
            let w = num_traits::pow::Pow::pow(x, g) / y;
            BigInt::from(rational_valuation(&w, l))
        }
        Family::Hyperelliptic { .. } => {
            // chart (1/x, y/x^(g+1)), cusps at (0, ±√d)
            let g = problem.genus as i32;
            let w = y / num_traits::pow::Pow::pow(x, g + 1);
            let eta = cusp_coordinate(problem, lambda.cusp)?;
            let diff = &QPoly::constant(w) - &eta;
            let a = if diff.is_zero() { i64::MAX } else { model.valuation(lambda, &diff)? };
            BigInt::from(a.min(-rational_valuation(x, l) * lambda.e as i64))
        }
        Family::Superelliptic { .. } => {
            // chart (y/x, 1/x), cusps at (η, 0)
            let u = y / x;
            let eta = cusp_coordinate(problem, lambda.cusp)?;
            let diff = &QPoly::constant(u) - &eta;
            let a = if diff.is_zero() { i64::MAX } else { model.valuation(lambda, &diff)? };
            BigInt::from(a.min(-rational_valuation(x, l) * lambda.e as i64))
        }
    };
    Ok(BigRational::from_integer(v.max(BigInt::zero())))
}

/// Fails unless every prime where one of the points meets a cusp closure
/// has its primes λ listed.
pub fn require_contact_primes(problem: &CurveProblem, model: &RegularModel, pts: &[&MarkedPoint]) -> Result<()> {
    for pt in pts {
        for ell in contact_primes(problem, &pt.point)? {
            model.require_primes_over(ell).map_err(|e| match e {
                Error::MissingIncidence(m) => Error::MissingIncidence(format!("{} meets the cusps over {ell}: {m}", pt.id)),
                other => other,
            })?;
        }
    }
    Ok(())
}
