use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curvegeom::{
    embedded_residue, CurveProblem, CyclicCover, DiscKind, Family, LocalParameter, LogDifferential, Point,
    RationalPoint, ResidueDisc,
};
use crate::error::{Error, Result};
use crate::padic::{hensel_embed, iwasawa_log, PadicNumber};
use crate::pseries::TruncatedSeries;

use super::hyperelliptic::HyperellipticIntegrator;
use super::superelliptic::SuperellipticIntegrator;

/// How an integral was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tiny,
    Frobenius,
    Pullback,
    Imported,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Tiny => "tiny",
            Method::Frobenius => "frobenius",
            Method::Pullback => "pullback",
            Method::Imported => "imported",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// Digits lost relative to the integrator's target precision.
    pub loss: i64,
    pub path: String,
}

#[derive(Clone, Debug)]
pub struct IntegralValue {
    pub value: PadicNumber,
    pub integrand: LogDifferential,
    pub from: Point,
    pub to: Point,
    pub method: Method,
    pub certificate: Certificate,
}

enum Engine {
    Hyperelliptic(HyperellipticIntegrator),
    Superelliptic(SuperellipticIntegrator),
}

/// Coleman integration of the log-differential basis of a validated problem.
///
/// Frobenius data is computed once at construction and only read afterwards;
/// the integrator is `Sync`.
pub struct CurveIntegrator {
    p: u32,
    prec: i64,
    size: usize,
    engine: Engine,
}

impl CurveIntegrator {
    pub fn new(problem: &CurveProblem) -> Result<Self> {
        Self::with_precision(problem, problem.prec)
    }

    pub fn with_precision(problem: &CurveProblem, prec: i64) -> Result<Self> {
        let p = problem.p;
        let engine = match &problem.family {
            Family::Hyperelliptic { f } => Engine::Hyperelliptic(HyperellipticIntegrator::from_qpoly(f, p, prec)?),
            Family::Superelliptic { a } => Engine::Superelliptic(SuperellipticIntegrator::new(a, p, prec)?),
        };
        Ok(CurveIntegrator { p, prec, size: problem.basis_size(), engine })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn basis_size(&self) -> usize {
        self.size
    }

    /// The affine model y^e = f(x) the endpoints live on.
    pub fn curve(&self) -> &CyclicCover {
        match &self.engine {
            Engine::Hyperelliptic(h) => h.cover(),
            Engine::Superelliptic(s) => s.curve(),
        }
    }

    pub fn hyperelliptic(&self) -> Option<&HyperellipticIntegrator> {
        match &self.engine {
            Engine::Hyperelliptic(h) => Some(h),
            Engine::Superelliptic(_) => None,
        }
    }

    pub fn superelliptic(&self) -> Option<&SuperellipticIntegrator> {
        match &self.engine {
            Engine::Superelliptic(s) => Some(s),
            Engine::Hyperelliptic(_) => None,
        }
    }

    /// A rational point as a p-adic point at the working precision.
    pub fn point(&self, pt: &RationalPoint) -> Result<Point> {
        let c = self.curve();
        let q = Point::from_rationals(self.p, &pt.x, &pt.y, c.precision());
        if !c.contains(&q) {
            return Err(Error::Invalid(format!("{pt} is not on the curve")));
        }
        Ok(q)
    }

    /// Discs on which global integrals cannot be anchored.
    pub fn is_restricted(&self, disc: &ResidueDisc) -> bool {
        match &self.engine {
            Engine::Hyperelliptic(_) => disc.kind == DiscKind::Infinite,
            Engine::Superelliptic(s) => s.is_restricted(disc),
        }
    }

    /// ∫_P^Q ω_j for every basis element, with the method used.
    pub fn basis_integrals(&self, from: &Point, to: &Point) -> Result<(Vec<PadicNumber>, Method)> {
        let same = self.curve().disc_of(from)? == self.curve().disc_of(to)?;
        let method = match (&self.engine, same) {
            (_, true) => Method::Tiny,
            (Engine::Hyperelliptic(_), false) => Method::Frobenius,
            (Engine::Superelliptic(_), false) => Method::Pullback,
        };
        let mut v = match &self.engine {
            Engine::Hyperelliptic(h) => h.integrals(from, to)?,
            Engine::Superelliptic(s) => s.integrals(from, to)?,
        };
        v.truncate(self.size);
        Ok((v, method))
    }

    fn combine(&self, omega: &LogDifferential, v: &[PadicNumber]) -> Result<PadicNumber> {
        if omega.coeffs.len() != self.size {
            return Err(Error::DimensionMismatch(format!(
                "differential has {} coefficients, basis has {}",
                omega.coeffs.len(),
                self.size
            )));
        }
        let mut acc = PadicNumber::exact_zero(self.p);
        for (a, x) in omega.coeffs.iter().zip(v) {
            if !a.is_exact_zero() {
                acc = &acc + &(a * x);
            }
        }
        Ok(acc)
    }

    fn value(&self, omega: &LogDifferential, from: &Point, to: &Point, v: Vec<PadicNumber>, method: Method) -> Result<IntegralValue> {
        let value = self.combine(omega, &v)?;
        let loss = (self.prec - value.precision()).max(0);
        let path = match method {
            Method::Tiny => format!("{} (one disc)", self.curve().disc_of(from)?.label()),
            _ => format!("{} -> {}", self.curve().disc_of(from)?.label(), self.curve().disc_of(to)?.label()),
        };
        Ok(IntegralValue {
            value,
            integrand: omega.clone(),
            from: from.clone(),
            to: to.clone(),
            method,
            certificate: Certificate { loss, path },
        })
    }

    /// ∫_P^Q ω.
    pub fn coleman_integral(&self, omega: &LogDifferential, from: &Point, to: &Point) -> Result<IntegralValue> {
        let (v, m) = self.basis_integrals(from, to)?;
        self.value(omega, from, to, v, m)
    }

    /// ∫_P^Q ω for P and Q in one residue disc.
    pub fn tiny_integral(&self, omega: &LogDifferential, from: &Point, to: &Point) -> Result<IntegralValue> {
        let (d1, d2) = (self.curve().disc_of(from)?, self.curve().disc_of(to)?);
        if d1 != d2 {
            return Err(Error::DifferentDiscs(format!("{} and {}", d1.label(), d2.label())));
        }
        if d1.kind == DiscKind::Infinite {
            return Err(Error::PoleOnDisc(d1.label()));
        }
        let (v, m) = self.basis_integrals(from, to)?;
        self.value(omega, from, to, v, m)
    }

    /// ∫ over Σ n_i [P_i] of every basis element (degree zero divisors only).
    pub fn divisor_integrals(&self, divisor: &[(i64, Point)], base: &Point) -> Result<Vec<PadicNumber>> {
        let degree: i64 = divisor.iter().map(|(n, _)| n).sum();
        if degree != 0 {
            return Err(Error::Invalid(format!("divisor has degree {degree}")));
        }
        let mut acc = vec![PadicNumber::exact_zero(self.p); self.size];
        for (n, pt) in divisor {
            let (v, _) = self.basis_integrals(base, pt)?;
            for (a, x) in acc.iter_mut().zip(&v) {
                *a = &*a + &x.mul_i64(*n);
            }
        }
        Ok(acc)
    }

    /// Antiderivatives of the basis on the disc of `center`, vanishing at
    /// `center`, together with the disc parametrization.
    pub fn local_expansion(&self, center: &Point) -> Result<(LocalParameter, Vec<TruncatedSeries>)> {
        match &self.engine {
            Engine::Hyperelliptic(h) => {
                let (lp, mut s) = h.expansion_at(center)?;
                s.truncate(self.size);
                Ok((lp, s))
            }
            Engine::Superelliptic(s) => s.local_antiderivatives(center),
        }
    }
}

/// Both sides of the residue theorem ∫_{div f} ω = Σ_Q Tr(Res_Q(ω)·log f(Q)).
///
/// `cusp_values[q][k]` is φ_k(f(Q_q)) for the k-th embedding of k(Q_q) in
/// the order returned by `hensel_embed`.
pub fn residue_theorem_check(
    integrator: &CurveIntegrator,
    problem: &CurveProblem,
    divisor: &[(i64, Point)],
    cusp_values: &[Vec<PadicNumber>],
    omega: &LogDifferential,
) -> Result<(PadicNumber, PadicNumber)> {
    let base = integrator.point(&problem.base_point)?;
    let lhs_parts = integrator.divisor_integrals(divisor, &base)?;
    let lhs = integrator.combine(omega, &lhs_parts)?;
    let mut rhs = PadicNumber::exact_zero(problem.p);
    if cusp_values.len() != problem.cusps.len() {
        return Err(Error::DimensionMismatch("one value list per cusp is required".into()));
    }
    for (q, cusp) in problem.cusps.iter().enumerate() {
        let embeddings = hensel_embed(cusp.field.minpoly(), problem.p, integrator.precision() + 4)?;
        if cusp_values[q].len() != embeddings.len() {
            return Err(Error::DimensionMismatch(format!("cusp {} needs {} values", cusp.name, embeddings.len())));
        }
        for (phi, fq) in embeddings.iter().zip(&cusp_values[q]) {
            let r = embedded_residue(problem, omega, q, phi)?;
            if r.is_exact_zero() {
                continue;
            }
            rhs = &rhs + &(&r * &iwasawa_log(fq)?);
        }
    }
    Ok((lhs, rhs))
}
