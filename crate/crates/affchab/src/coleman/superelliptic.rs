use num_bigint::BigInt;
use num_rational::BigRational;

use crate::curvegeom::{series_order, CyclicCover, DiscKind, LocalParameter, Point, ResidueDisc};
use crate::error::{Error, Result};
use crate::padic::{iwasawa_log, PadicNumber, PadicPoly};
use crate::pseries::TruncatedSeries;
use crate::qlinalg::{fp, QPoly};

use super::hyperelliptic::HyperellipticIntegrator;

/// Cube roots of unity mod p, 1 first.
fn cube_roots_mod(p: u32) -> Vec<u64> {
    let pp = p as u64;
    (1..pp).filter(|&r| fp::pow(r, 3, pp) == 1).collect()
}

/// Coleman integrals of ω₁ = dx/y², ω₂ = x dx/y², ω₃ = dx/y on
/// y³ = x³ + a x² + x, from the base point (0, 0).
///
/// With u′ = y/x and v′ = 1/x + a/2 the curve becomes the elliptic curve
/// E: v′² = u′³ + a²/4 − 1, where ω₁ = −(3/2) du′/v′. The parts of ω₂, ω₃
/// symmetric under v′ ↦ −v′ are sums of dlog(u′ − η) over the cube roots of
/// unity η; the antisymmetric parts are −Σ η^{±1}·τ_η*(s ds/2t) on the quartics
/// X_η: t² = s⁴ + (12η²/a²)s³ + (12η/a²)s² + (4/a²)s, reached by
/// τ_η(u′, v′) = (1/(u′ − η), −2v′/(a(u′ − η)²)). The base point maps to the
/// origin of E and to the Weierstrass point (0, 0) of every X_η.
pub struct SuperellipticIntegrator {
    a: BigInt,
    p: u32,
    prec: i64,
    curve: CyclicCover,
    order: usize,
    elliptic: HyperellipticIntegrator,
    roots: Vec<PadicNumber>,
    quartics: Vec<HyperellipticIntegrator>,
}

fn rq(a: &BigInt, num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den)) * BigRational::from_integer(a.clone())
}

impl SuperellipticIntegrator {
    pub fn new(a: &BigInt, p: u32, n: i64) -> Result<Self> {
        if p % 3 != 1 {
            return Err(Error::BadReduction(format!("p = {p} is not 1 mod 3")));
        }
        let cprec = n + 6;
        let af = BigRational::from_integer(a.clone());
        let f = QPoly::new(vec![rq(a, 0, 1), rq(&BigInt::from(1), 1, 1), af.clone(), rq(&BigInt::from(1), 1, 1)]);
        let curve = CyclicCover::new(3, PadicPoly::from_qpoly(&f, p, cprec), cprec)?;
        // v′² = u′³ + a²/4 − 1
        let c0 = &af * &af / BigRational::from_integer(4.into()) - BigRational::from_integer(1.into());
        let e = QPoly::new(vec![c0, rq(&BigInt::from(0), 1, 1), rq(&BigInt::from(0), 1, 1), rq(&BigInt::from(1), 1, 1)]);
        let elliptic = HyperellipticIntegrator::from_qpoly(&e, p, n)?;
        let residues = cube_roots_mod(p);
        let root_at = |r: u64, w: i64| -> Result<PadicNumber> { PadicNumber::from_int(p, r as i64, w).teichmuller(w) };
        let a2 = &af * &af;
        let mut quartics = Vec::with_capacity(3);
        for &r in &residues {
            let at = |w: i64| -> PadicPoly {
                let eta = root_at(r, w).expect("cube root of unity lifts");
                let c3 = PadicNumber::from_rational(p, &(BigRational::from_integer(12.into()) / &a2), w);
                let c1 = PadicNumber::from_rational(p, &(BigRational::from_integer(4.into()) / &a2), w);
                let coeffs = vec![
                    PadicNumber::exact_zero(p),
                    c1,
                    &c3 * &eta,
                    &c3 * &(&eta * &eta),
                    PadicNumber::one(p, w),
                ];
                PadicPoly::new(p, coeffs)
            };
            quartics.push(HyperellipticIntegrator::new(&at, n)?);
        }
        let roots = residues.iter().map(|&r| root_at(r, cprec)).collect::<Result<Vec<_>>>()?;
        let order = series_order(p, cprec);
        Ok(SuperellipticIntegrator { a: a.clone(), p, prec: n, curve, order, elliptic, roots, quartics })
    }

    pub fn curve(&self) -> &CyclicCover {
        &self.curve
    }

    pub fn elliptic(&self) -> &HyperellipticIntegrator {
        &self.elliptic
    }

    pub fn quartic(&self, k: usize) -> &HyperellipticIntegrator {
        &self.quartics[k]
    }

    /// The cube roots of unity in Z_p, 1 first.
    pub fn roots_of_unity(&self) -> &[PadicNumber] {
        &self.roots
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn base_point(&self) -> Point {
        Point::new(PadicNumber::exact_zero(self.p), PadicNumber::exact_zero(self.p))
    }

    /// Residue discs whose points map into a disc of E where some τ_η has a
    /// pole: x ≡ −1/a, i.e. u′ reduces to a cube root of unity.
    pub fn is_restricted(&self, disc: &ResidueDisc) -> bool {
        let pp = self.p as u64;
        match disc.point {
            None => true,
            Some((x, _)) => {
                let a = (&self.a % BigInt::from(pp) + BigInt::from(pp)) % BigInt::from(pp);
                let a: u64 = a.try_into().unwrap_or(0);
                (a * x + 1).is_multiple_of(pp)
            }
        }
    }

    /// The chart (u′, v′) = (y/x, 1/x + a/2).
    pub fn to_elliptic(&self, pt: &Point) -> Result<Point> {
        let u = pt.y.div(&pt.x)?;
        let half_a = PadicNumber::from_rational(self.p, &rq(&self.a, 1, 2), pt.x.precision().max(self.prec + 6));
        let v = &pt.x.inverse()? + &half_a;
        Ok(Point::new(u, v))
    }

    fn tiny_all(&self, from: &Point, to: &Point) -> Result<Vec<PadicNumber>> {
        [(0usize, 2u32), (1, 2), (0, 1)]
            .iter()
            .map(|&(i, k)| self.curve.tiny_integral(i, k, from, to).map(|v| v.reduce_precision(self.prec)))
            .collect()
    }

    /// Local antiderivatives of (ω₁, ω₂, ω₃) on the disc of `center`,
    /// vanishing at the center.
    pub fn local_antiderivatives(&self, center: &Point) -> Result<(LocalParameter, Vec<TruncatedSeries>)> {
        let lp = self.curve.local_parameter(center, self.order)?;
        let series = [(0usize, 2u32), (1, 2), (0, 1)]
            .iter()
            .map(|&(i, k)| self.curve.antiderivative(&lp, i, k))
            .collect::<Result<Vec<_>>>()?;
        Ok((lp, series))
    }

    /// (∫ ω₁, ∫ ω₂, ∫ ω₃) from the base point (0, 0) to `pt`.
    pub fn from_base(&self, pt: &Point) -> Result<Vec<PadicNumber>> {
        let disc = self.curve.disc_of(pt)?;
        let base = self.base_point();
        if disc == self.curve.disc_of(&base)? {
            return self.tiny_all(&base, pt);
        }
        if disc.kind == DiscKind::Infinite || self.is_restricted(&disc) {
            return Err(Error::EndpointRestriction(format!(
                "disc {} meets a pole of the transport maps",
                disc.label()
            )));
        }
        let q = self.to_elliptic(pt)?;
        let p = self.p;
        let to_origin = self.elliptic.integrals_to_infinity(&q)?;
        let i1 = to_origin[0].mul_rational(&BigRational::new(3.into(), 2.into()));
        let half = BigRational::new(1.into(), 2.into());
        let aq = BigRational::from_integer(self.a.clone());
        let w0 = Point::new(PadicNumber::exact_zero(p), PadicNumber::exact_zero(p));
        let mut i2 = PadicNumber::exact_zero(p);
        let mut i3 = PadicNumber::exact_zero(p);
        for (k, eta) in self.roots.iter().enumerate() {
            let eta_inv = eta * eta;
            let d = &q.x - eta;
            let l = iwasawa_log(&d)?;
            let s = d.inverse()?;
            let t = q.y.mul_i64(-2).div(&(&d * &d).mul_rational(&aq))?;
            let j = self.quartics[k].integrals(&w0, &Point::new(s, t))?[1].clone();
            let both = &l + &j;
            i2 = &i2 - &(eta * &both).mul_rational(&half);
            i3 = &i3 - &(&eta_inv * &both).mul_rational(&half);
        }
        Ok([i1, i2, i3].into_iter().map(|v| v.reduce_precision(self.prec)).collect())
    }

    /// (∫ ω₁, ∫ ω₂, ∫ ω₃) from P to Q.
    pub fn integrals(&self, from: &Point, to: &Point) -> Result<Vec<PadicNumber>> {
        if self.curve.disc_of(from)? == self.curve.disc_of(to)? {
            return self.tiny_all(from, to);
        }
        let a = self.from_base(from)?;
        let b = self.from_base(to)?;
        Ok(b.iter().zip(&a).map(|(x, y)| x - y).collect())
    }
}
