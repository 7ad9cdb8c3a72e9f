use std::fmt;

use num_bigint::BigInt;

use super::number::{PadicNumber, INFINITE};
use crate::error::{Error, Result};
use crate::qlinalg::QPoly;

/// Dense polynomial over Q_p, constant term first. Trailing exact zeros are
/// trimmed; inexact zeros are kept since they still carry precision.
#[derive(Clone)]
pub struct PadicPoly {
    p: u32,
    coeffs: Vec<PadicNumber>,
}

impl PadicPoly {
    pub fn new(p: u32, mut coeffs: Vec<PadicNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        PadicPoly { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        PadicPoly { p, coeffs: vec![] }
    }

    pub fn constant(c: PadicNumber) -> Self {
        Self::new(c.prime(), vec![c])
    }

    pub fn monomial(c: PadicNumber, k: usize) -> Self {
        let p = c.prime();
        let mut v = vec![PadicNumber::exact_zero(p); k + 1];
        v[k] = c;
        Self::new(p, v)
    }

    pub fn from_qpoly(q: &QPoly, p: u32, prec: i64) -> Self {
        Self::new(p, q.coeffs().iter().map(|c| PadicNumber::from_rational(p, c, prec)).collect())
    }

    pub fn from_ints(p: u32, c: &[i64], prec: i64) -> Self {
        Self::new(p, c.iter().map(|&x| PadicNumber::from_int(p, x, prec)).collect())
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(|| PadicNumber::exact_zero(self.p))
    }

    /// Length of the coefficient vector minus one; −1 when empty.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> PadicNumber {
        self.coeffs.last().cloned().unwrap_or_else(|| PadicNumber::exact_zero(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Minimum absolute precision over the coefficients.
    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(INFINITE)
    }

    pub fn reduce_precision(&self, n: i64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|c| c.reduce_precision(n)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero(self.p);
        }
        let mut v = vec![PadicNumber::exact_zero(self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Self::new(self.p, v)
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|a| a.mul_i64(k)).collect())
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|a| a.div_int(k)).collect())
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut v = vec![PadicNumber::exact_zero(self.p); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(self.p, v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_i64(i as i64)).collect())
    }

    pub fn eval(&self, x: &PadicNumber) -> PadicNumber {
        let mut acc = PadicNumber::exact_zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// n-th power, n ≥ 1.
    pub fn pow(&self, n: u32) -> Self {
        assert!(n >= 1, "zeroth power of a p-adic polynomial");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitution x ↦ x^k.
    pub fn compose_power(&self, k: usize) -> Self {
        let mut v = vec![PadicNumber::exact_zero(self.p); (self.coeffs.len().max(1) - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(self.p, v)
    }

    /// Composition self(g).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Coefficients of f(w + h) as a polynomial in h.
    pub fn taylor_shift(&self, w: &PadicNumber) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for k in 0..n {
            for j in (k..n.saturating_sub(1)).rev() {
                let add = &c[j + 1] * w;
                c[j] = &c[j] + &add;
            }
        }
        Self::new(self.p, c)
    }

    /// Division with remainder by a polynomial whose leading coefficient is
    /// a p-adic unit.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let lc = d.leading();
        if !lc.is_unit() {
            return Err(Error::NotAUnit(format!("leading coefficient {lc} of divisor")));
        }
        let dd = d.coeffs.len();
        let mut r = self.coeffs.clone();
        if r.len() < dd {
            return Ok((Self::zero(self.p), self.clone()));
        }
        let inv = lc.inverse()?;
        let mut q = vec![PadicNumber::exact_zero(self.p); r.len() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd - 1] * &inv;
            if !c.is_exact_zero() {
                for j in 0..dd {
                    r[i + j] = &r[i + j] - &(&c * &d.coeffs[j]);
                }
            }
            q[i] = c;
        }
        r.truncate(dd - 1);
        Ok((Self::new(self.p, q), Self::new(self.p, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Residues of the coefficients mod p (None if some coefficient is not
    /// integral).
    pub fn reduce_mod_p(&self) -> Option<Vec<u64>> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if c.valuation_bound() < 0 {
                return None;
            }
            v.push(c.residue().ok()? as u64);
        }
        crate::qlinalg::fp::trim(&mut v);
        Some(v)
    }
}

impl fmt::Debug for PadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().enumerate().map(|(i, c)| format!("({c})*x^{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
