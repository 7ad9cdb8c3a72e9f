use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::QPoly;
use super::rational::RationalMatrix;
use crate::error::{Error, Result};

/// A number field Q[θ]/(m(θ)) given by a monic squarefree minimal
/// polynomial. Elements are polynomials in θ of degree < deg m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    minpoly: QPoly,
}

impl NumberField {
    pub fn new(minpoly: QPoly) -> Result<Self> {
        if minpoly.degree() < 1 {
            return Err(Error::Invalid("minimal polynomial must have positive degree".into()));
        }
        if !minpoly.is_squarefree() {
            return Err(Error::Invalid(format!("minimal polynomial {minpoly} is not squarefree")));
        }
        Ok(NumberField { minpoly: minpoly.monic() })
    }

    /// Q itself, presented as Q[θ]/(θ).
    pub fn rationals() -> Self {
        NumberField { minpoly: QPoly::x() }
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree() as usize
    }

    pub fn element(&self, a: &QPoly) -> QPoly {
        a.rem(&self.minpoly)
    }

    pub fn from_rational(&self, q: BigRational) -> QPoly {
        QPoly::constant(q)
    }

    /// The generator θ (zero in the presentation of Q).
    pub fn generator(&self) -> QPoly {
        self.element(&QPoly::x())
    }

    pub fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.element(&(a + b))
    }

    pub fn sub(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.element(&(a - b))
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.element(&(a * b))
    }

    pub fn inv(&self, a: &QPoly) -> Result<QPoly> {
        let a = self.element(a);
        if a.is_zero() {
            return Err(Error::ZeroInput("inverse of zero field element".into()));
        }
        let (g, s, _) = a.ext_gcd(&self.minpoly);
        if g.degree() != 0 {
            return Err(Error::Invalid("element is a zero divisor (minimal polynomial reducible)".into()));
        }
        Ok(self.element(&s))
    }

    pub fn pow(&self, a: &QPoly, n: u32) -> QPoly {
        let mut acc = QPoly::constant(BigRational::one());
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Matrix of multiplication by a on the power basis.
    pub fn multiplication_matrix(&self, a: &QPoly) -> RationalMatrix {
        let n = self.degree();
        let mut m = RationalMatrix::zeros(n, n);
        let mut basis = QPoly::constant(BigRational::one());
        for j in 0..n {
            let col = self.mul(a, &basis);
            for i in 0..n {
                m.set(i, j, col.coeff(i));
            }
            basis = self.mul(&basis, &QPoly::x());
        }
        m
    }

    pub fn norm(&self, a: &QPoly) -> BigRational {
        self.multiplication_matrix(a).det()
    }

    pub fn trace(&self, a: &QPoly) -> BigRational {
        let m = self.multiplication_matrix(a);
        (0..self.degree()).fold(BigRational::zero(), |acc, i| acc + m.get(i, i))
    }

    /// (r₁, r₂): real embeddings and pairs of complex embeddings.
    pub fn signature(&self) -> (usize, usize) {
        let r1 = self.minpoly.real_root_count();
        (r1, (self.degree() - r1) / 2)
    }

    /// Rank of the unit group (Dirichlet).
    pub fn unit_rank(&self) -> usize {
        let (r1, r2) = self.signature();
        r1 + r2 - 1
    }
}
