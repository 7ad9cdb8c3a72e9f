use std::collections::HashMap;
use std::sync::Mutex;

use crate::curvegeom::{series_order, CyclicCover, DiscKind, LocalParameter, Point, ResidueDisc};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, PadicPoly};
use crate::pseries::TruncatedSeries;
use crate::qlinalg::{PadicMatrix, QPoly};

use super::frobenius::FrobeniusData;

/// Coleman integrals of x^i dx/y (i = 0..deg f − 2) on y² = f(x).
///
/// Endpoints are moved by tiny integrals to the canonical point of their
/// disc: the Teichmüller point on ordinary discs (fixed by the Frobenius
/// lift) and the Weierstrass point otherwise. Between Teichmüller points the
/// integrals solve (I − M)v = h(T₂) − h(T₁); every basis form is odd under
/// y ↦ −y, so ∫_W^T = ½∫_{ιT}^T for a Weierstrass point W.
pub struct HyperellipticIntegrator {
    cover: CyclicCover,
    frob: FrobeniusData,
    prec: i64,
    order: usize,
    params: Mutex<HashMap<ResidueDisc, (LocalParameter, Vec<TruncatedSeries>)>>,
}

/// How a disc is anchored.
enum Anchor {
    Teichmuller(Point),
    Weierstrass(Point),
}

impl Anchor {
    fn point(&self) -> &Point {
        match self {
            Anchor::Teichmuller(p) | Anchor::Weierstrass(p) => p,
        }
    }
}

impl HyperellipticIntegrator {
    /// Integrator for y² = f(x), f with integer (or p-adic integral)
    /// coefficients; `f_at(w)` must return f to absolute precision w.
    pub fn new(f_at: &dyn Fn(i64) -> PadicPoly, n: i64) -> Result<Self> {
        let f0 = f_at(n);
        let p = f0.prime();
        let d = f0.degree() as usize;
        let target = n + 3;
        let w = FrobeniusData::working_precision(p, d, target);
        let frob = FrobeniusData::new(&f_at(w), target)?;
        let cprec = n + 6;
        let cover = CyclicCover::new(2, f_at(cprec), cprec)?;
        let order = series_order(p, cprec);
        Ok(HyperellipticIntegrator { cover, frob, prec: n, order, params: Mutex::new(HashMap::new()) })
    }

    /// Integrator for y² = f(x) with rational f.
    pub fn from_qpoly(f: &QPoly, p: u32, n: i64) -> Result<Self> {
        Self::new(&|w| PadicPoly::from_qpoly(f, p, w), n)
    }

    pub fn cover(&self) -> &CyclicCover {
        &self.cover
    }

    pub fn frobenius(&self) -> &FrobeniusData {
        &self.frob
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn basis_size(&self) -> usize {
        self.cover.degree() - 1
    }

    /// A point from rational coordinates at the integrator's precision.
    pub fn point(&self, x: &num_rational::BigRational, y: &num_rational::BigRational) -> Result<Point> {
        let pt = Point::from_rationals(self.cover.prime(), x, y, self.cover.precision());
        if !self.cover.contains(&pt) {
            return Err(Error::Invalid(format!("({x}, {y}) is not on the curve")));
        }
        Ok(pt)
    }

    fn anchor(&self, disc: &ResidueDisc) -> Result<Anchor> {
        match disc.kind {
            DiscKind::Ordinary => Ok(Anchor::Teichmuller(self.cover.teichmuller_point(disc)?)),
            DiscKind::Weierstrass => Ok(Anchor::Weierstrass(self.cover.default_center(disc)?)),
            DiscKind::Infinite => Err(Error::EndpointRestriction(format!(
                "disc {} at infinity contains a pole of the log differentials",
                disc.label()
            ))),
        }
    }

    /// Antiderivatives from the disc anchor, cached per disc.
    fn disc_series(&self, disc: &ResidueDisc) -> Result<(LocalParameter, Vec<TruncatedSeries>)> {
        if let Some(v) = self.params.lock().expect("disc cache").get(disc) {
            return Ok(v.clone());
        }
        let anchor = self.anchor(disc)?;
        let lp = self.cover.local_parameter(anchor.point(), self.order)?;
        let series = (0..self.basis_size())
            .map(|i| self.cover.antiderivative(&lp, i, 1))
            .collect::<Result<Vec<_>>>()?;
        self.params.lock().expect("disc cache").insert(disc.clone(), (lp.clone(), series.clone()));
        Ok((lp, series))
    }

    /// Antiderivatives of the basis forms on the disc of `pt`, vanishing at
    /// the disc anchor, together with the parametrization.
    pub fn local_antiderivatives(&self, disc: &ResidueDisc) -> Result<(LocalParameter, Vec<TruncatedSeries>)> {
        self.disc_series(disc)
    }

    /// Antiderivatives of the basis forms vanishing at an arbitrary center
    /// (a Weierstrass point on Weierstrass discs).
    pub fn expansion_at(&self, center: &Point) -> Result<(LocalParameter, Vec<TruncatedSeries>)> {
        let lp = self.cover.local_parameter(center, self.order)?;
        let series = (0..self.basis_size())
            .map(|i| self.cover.antiderivative(&lp, i, 1))
            .collect::<Result<Vec<_>>>()?;
        Ok((lp, series))
    }

    /// ∫ from the anchor of P's disc to P.
    fn from_anchor(&self, pt: &Point) -> Result<Vec<PadicNumber>> {
        let disc = self.cover.disc_of(pt)?;
        let (lp, series) = self.disc_series(&disc)?;
        let t = self.cover.parameter_of(&lp, pt)?;
        series.iter().map(|s| s.eval(&t)).collect()
    }

    /// Tiny integrals ∫_P^Q for P, Q in one disc.
    pub fn tiny(&self, from: &Point, to: &Point) -> Result<Vec<PadicNumber>> {
        let d1 = self.cover.disc_of(from)?;
        let d2 = self.cover.disc_of(to)?;
        if d1 != d2 {
            return Err(Error::DifferentDiscs(format!("{} and {}", d1.label(), d2.label())));
        }
        let a = self.from_anchor(from)?;
        let b = self.from_anchor(to)?;
        Ok(self.finish(b.iter().zip(&a).map(|(x, y)| x - y).collect()))
    }

    /// ∫_{T₁}^{T₂} between Teichmüller points from Frobenius equivariance.
    fn between_teichmuller(&self, t1: &Point, t2: &Point) -> Result<Vec<PadicNumber>> {
        let n = self.basis_size();
        let p = self.cover.prime();
        let m = self.frob.matrix();
        let prec = self.frob.precision();
        let mut a = PadicMatrix::identity(p, n, prec + 8);
        for i in 0..n {
            for j in 0..n {
                let v = a.get(i, j) - m.get(i, j);
                a.set(i, j, v);
            }
        }
        let mut rhs = Vec::with_capacity(n);
        for h in self.frob.exact_parts() {
            rhs.push(&h.eval(t2)? - &h.eval(t1)?);
        }
        a.solve(&rhs)
    }

    fn between(&self, a: &Anchor, b: &Anchor) -> Result<Vec<PadicNumber>> {
        let n = self.basis_size();
        let p = self.cover.prime();
        let half = |v: Vec<PadicNumber>| -> Vec<PadicNumber> { v.iter().map(|x| x.div_i64(2)).collect() };
        match (a, b) {
            (Anchor::Teichmuller(t1), Anchor::Teichmuller(t2)) => {
                if t1.agrees_with(t2) {
                    return Ok(vec![PadicNumber::exact_zero(p); n]);
                }
                self.between_teichmuller(t1, t2)
            }
            (Anchor::Weierstrass(_), Anchor::Teichmuller(t)) => {
                Ok(half(self.between_teichmuller(&self.reflect(t)?, t)?))
            }
            (Anchor::Teichmuller(t), Anchor::Weierstrass(_)) => {
                Ok(half(self.between_teichmuller(t, &self.reflect(t)?)?))
            }
            (Anchor::Weierstrass(_), Anchor::Weierstrass(_)) => Ok(vec![PadicNumber::exact_zero(p); n]),
        }
    }

    /// The Teichmüller point of the disc opposite to t's.
    fn reflect(&self, t: &Point) -> Result<Point> {
        let disc = self.cover.disc_of(&t.opposite())?;
        self.cover.teichmuller_point(&disc)
    }

    fn finish(&self, v: Vec<PadicNumber>) -> Vec<PadicNumber> {
        v.into_iter().map(|x| x.reduce_precision(self.prec)).collect()
    }

    /// ∫_P^Q x^i dx/y for every basis index i.
    pub fn integrals(&self, from: &Point, to: &Point) -> Result<Vec<PadicNumber>> {
        let d1 = self.cover.disc_of(from)?;
        let d2 = self.cover.disc_of(to)?;
        if d1 == d2 {
            return self.tiny(from, to);
        }
        let a1 = self.anchor(&d1)?;
        let a2 = self.anchor(&d2)?;
        let head = self.from_anchor(from)?;
        let mid = self.between(&a1, &a2)?;
        let tail = self.from_anchor(to)?;
        Ok(self.finish((0..self.basis_size()).map(|i| &(&tail[i] - &head[i]) + &mid[i]).collect()))
    }

    /// ∫_P^W for the Weierstrass point at infinity of an odd-degree model.
    pub fn integrals_to_infinity(&self, from: &Point) -> Result<Vec<PadicNumber>> {
        if self.cover.degree().is_multiple_of(2) {
            return Err(Error::EndpointRestriction("even-degree models have no Weierstrass point at infinity".into()));
        }
        // ∫_P^∞ = ½∫_P^{ιP}, as ∞ is fixed by the involution
        let v = self.integrals(from, &from.opposite())?;
        Ok(v.iter().map(|x| x.div_i64(2)).collect())
    }
}
