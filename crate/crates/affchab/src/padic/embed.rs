use num_rational::BigRational;
use num_traits::{One, Zero};

use super::log::iwasawa_log;
use super::number::PadicNumber;
use super::poly::PadicPoly;
use crate::error::{Error, Result};
use crate::qlinalg::{fp, NumberField, QPoly};

/// An embedding φ: k → Q_p of a number field, determined by the image of
/// the generator.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    field: NumberField,
    root: PadicNumber,
    prec: i64,
}

impl FieldEmbedding {
    /// The unique embedding of Q (presented as Q[θ]/(θ)).
    pub fn rational(p: u32, prec: i64) -> Self {
        FieldEmbedding { field: NumberField::rationals(), root: PadicNumber::exact_zero(p), prec }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// φ(θ).
    pub fn root(&self) -> &PadicNumber {
        &self.root
    }

    pub fn prime(&self) -> u32 {
        self.root.prime()
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// φ applied to a field element given as a polynomial in the generator.
    pub fn apply(&self, a: &QPoly) -> PadicNumber {
        let a = self.field.element(a);
        a.eval_padic(&self.root, self.prec)
    }

    pub fn apply_rational(&self, q: &BigRational) -> PadicNumber {
        PadicNumber::from_rational(self.prime(), q, self.prec)
    }
}

/// All embeddings of Q[x]/(minpoly) into Q_p, one per simple root of the
/// reduction mod p, Hensel-lifted to absolute precision `prec`.
pub fn hensel_embed(minpoly: &QPoly, p: u32, prec: i64) -> Result<Vec<FieldEmbedding>> {
    let field = NumberField::new(minpoly.clone())?;
    let m = field.minpoly().clone();
    if m.degree() == 1 {
        let root = PadicNumber::from_rational(p, &-m.coeff(0), prec);
        return Ok(vec![FieldEmbedding { field, root, prec }]);
    }
    let reduced = m
        .reduce_mod(p)
        .ok_or_else(|| Error::Invalid(format!("minimal polynomial {m} is not {p}-integral")))?;
    let pp = p as u64;
    let g = fp::gcd(&reduced, &fp::derivative(&reduced, pp), pp);
    if g.len() > 1 {
        return Err(Error::NonSeparableReduction { p });
    }
    let f = PadicPoly::from_qpoly(&m, p, prec);
    let df = f.derivative();
    let mut out = Vec::new();
    for r in fp::roots(&reduced, pp) {
        let root = newton_lift(&f, &df, PadicNumber::from_int(p, r as i64, prec), prec)?;
        out.push(FieldEmbedding { field: field.clone(), root, prec });
    }
    Ok(out)
}

/// Newton iteration from an approximate simple root, to absolute precision
/// `prec`.
pub fn newton_lift(f: &PadicPoly, df: &PadicPoly, x0: PadicNumber, prec: i64) -> Result<PadicNumber> {
    let mut x = x0;
    let mut known = 1;
    loop {
        let fx = f.eval(&x);
        let d = df.eval(&x);
        if d.valuation_bound() > 0 {
            return Err(Error::NonSeparableReduction { p: x.prime() });
        }
        let step = fx.div(&d)?;
        x = (&x - &step).reduce_precision(prec);
        if known >= prec {
            return Ok(x);
        }
        known *= 2;
    }
}

/// a^q for a field element a and rational q, an element of k^× ⊗ Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPower {
    pub base: QPoly,
    pub exponent: BigRational,
}

impl RationalPower {
    pub fn new(base: QPoly, exponent: BigRational) -> Self {
        RationalPower { base, exponent }
    }

    pub fn plain(base: QPoly) -> Self {
        RationalPower { base, exponent: BigRational::one() }
    }

    /// Raises to a further rational power (multiplies exponents).
    pub fn pow(&self, q: &BigRational) -> Self {
        RationalPower { base: self.base.clone(), exponent: &self.exponent * q }
    }
}

/// log φ(a^q) := q·log φ(a) on the Iwasawa branch.
pub fn log_rational_power(x: &RationalPower, phi: &FieldEmbedding) -> Result<PadicNumber> {
    if x.exponent.is_zero() {
        return Ok(PadicNumber::exact_zero(phi.prime()));
    }
    let v = phi.apply(&x.base);
    Ok(iwasawa_log(&v)?.mul_rational(&x.exponent))
}
