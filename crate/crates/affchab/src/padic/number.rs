use std::cell::RefCell;
use std::cmp::{min, Ordering};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Stand-in for +∞ in valuations and precisions.
pub const INFINITE: i64 = i64::MAX;

thread_local! {
    static POWERS: RefCell<HashMap<u32, Vec<BigInt>>> = RefCell::new(HashMap::new());
}

/// p^k as a big integer, cached per thread.
pub fn p_pow(p: u32, k: i64) -> BigInt {
    assert!(k >= 0, "negative exponent {k}");
    let k = k as usize;
    POWERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let table = map.entry(p).or_insert_with(|| vec![BigInt::one()]);
        while table.len() <= k {
            let next = table.last().unwrap() * p;
            table.push(next);
        }
        table[k].clone()
    })
}

/// Strips the p-part from a nonzero integer and returns its exponent.
pub(crate) fn remove_p(x: &mut BigInt, p: u32) -> i64 {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        *x = q;
        v += 1;
    }
}

/// v_p of a nonzero integer.
pub fn int_valuation(x: &BigInt, p: u32) -> i64 {
    if x.is_zero() {
        return INFINITE;
    }
    let mut y = x.clone();
    remove_p(&mut y, p)
}

/// v_p of a rational, INFINITE for zero.
pub fn rational_valuation(q: &BigRational, p: u32) -> i64 {
    if q.is_zero() {
        return INFINITE;
    }
    int_valuation(q.numer(), p) - int_valuation(q.denom(), p)
}

/// Inverse of a unit modulo m.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.is_one(), "not invertible");
    g.x.mod_floor(m)
}

/// Three-valued comparison outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Both sides are exact and equal.
    Equal,
    /// The difference is provably nonzero.
    Distinct,
    /// The difference vanishes to the available precision.
    Indistinguishable,
}

/// An element p^v·u + O(p^N) of Q_p with tracked absolute precision N.
///
/// Exact zero has v = N = INFINITE. Nonzero values always carry finite
/// precision, and the unit u is reduced modulo p^(N−v).
#[derive(Clone)]
pub struct PadicNumber {
    p: u32,
    val: i64,
    unit: BigInt,
    prec: i64,
}

impl PadicNumber {
    pub fn exact_zero(p: u32) -> Self {
        PadicNumber { p, val: INFINITE, unit: BigInt::zero(), prec: INFINITE }
    }

    /// Zero known to absolute precision `prec`.
    pub fn zero(p: u32, prec: i64) -> Self {
        PadicNumber { p, val: INFINITE, unit: BigInt::zero(), prec }
    }

    pub fn one(p: u32, prec: i64) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn from_int(p: u32, n: i64, prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    /// Exact zero for 0, otherwise the integer to absolute precision `prec`.
    pub fn from_bigint(p: u32, n: &BigInt, prec: i64) -> Self {
        if n.is_zero() {
            return Self::exact_zero(p);
        }
        Self::from_parts(p, n.clone(), 0, prec)
    }

    /// Exact zero for 0, otherwise the rational to absolute precision `prec`.
    pub fn from_rational(p: u32, q: &BigRational, prec: i64) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let mut num = q.numer().clone();
        let mut den = q.denom().clone();
        let vn = remove_p(&mut num, p);
        let vd = remove_p(&mut den, p);
        let v = vn - vd;
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = p_pow(p, prec - v);
        let unit = (num * mod_inverse(&den, &m)).mod_floor(&m);
        PadicNumber { p, val: v, unit, prec }
    }

    /// Builds x·p^shift + O(p^prec), normalizing the representation.
    pub(crate) fn from_parts(p: u32, mut x: BigInt, shift: i64, prec: i64) -> Self {
        if x.is_zero() {
            return if prec == INFINITE { Self::exact_zero(p) } else { Self::zero(p, prec) };
        }
        assert!(prec != INFINITE, "exact nonzero p-adic values are not representable");
        let v = shift + remove_p(&mut x, p);
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = p_pow(p, prec - v);
        let unit = x.mod_floor(&m);
        PadicNumber { p, val: v, unit, prec }
    }

    /// Unit with the given integer residue digits and relative precision.
    pub fn from_unit_parts(p: u32, val: i64, unit: BigInt, prec: i64) -> Self {
        Self::from_parts(p, unit, val, prec)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Valuation, INFINITE when the value is indistinguishable from zero.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Absolute precision N (INFINITE only for exact zero).
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Number of known digits past the valuation (0 for zero).
    pub fn relative_precision(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.prec - self.val
        }
    }

    /// Lower bound for the valuation: the valuation when nonzero, the
    /// precision otherwise.
    pub fn valuation_bound(&self) -> i64 {
        if self.is_zero() {
            self.prec
        } else {
            self.val
        }
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// True when the value is indistinguishable from zero.
    pub fn is_zero(&self) -> bool {
        self.val == INFINITE
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val == INFINITE && self.prec == INFINITE
    }

    pub fn is_unit(&self) -> bool {
        self.val == 0
    }

    /// Lowers the absolute precision to at most `n`.
    pub fn reduce_precision(&self, n: i64) -> Self {
        if n >= self.prec {
            return self.clone();
        }
        if self.is_zero() || self.val >= n {
            return Self::zero(self.p, n);
        }
        let m = p_pow(self.p, n - self.val);
        PadicNumber { p: self.p, val: self.val, unit: self.unit.mod_floor(&m), prec: n }
    }

    /// Raises the declared precision of an exact-zero-padded value. Only for
    /// values known to be exact beyond their stored precision (e.g. integers).
    pub fn with_precision_unchecked(&self, n: i64) -> Self {
        if self.is_zero() {
            return if self.is_exact_zero() { self.clone() } else { Self::zero(self.p, n) };
        }
        PadicNumber { p: self.p, val: self.val, unit: self.unit.clone(), prec: n.max(self.val + 1) }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
    }

    fn add_impl(&self, other: &Self) -> Self {
        self.check_prime(other);
        let prec = min(self.prec, other.prec);
        if prec == INFINITE {
            return Self::exact_zero(self.p);
        }
        let va = if self.is_zero() { INFINITE } else { self.val };
        let vb = if other.is_zero() { INFINITE } else { other.val };
        let v0 = min(va, vb);
        if v0 >= prec {
            return Self::zero(self.p, prec);
        }
        let mut x = BigInt::zero();
        if va < prec {
            x += &self.unit * p_pow(self.p, va - v0);
        }
        if vb < prec {
            x += &other.unit * p_pow(self.p, vb - v0);
        }
        Self::from_parts(self.p, x, v0, prec)
    }

    fn neg_impl(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = p_pow(self.p, self.prec - self.val);
        PadicNumber { p: self.p, val: self.val, unit: &m - &self.unit, prec: self.prec }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_prime(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero(self.p);
        }
        let la = self.valuation_bound();
        let lb = other.valuation_bound();
        let prec = min(la.saturating_add(other.prec), lb.saturating_add(self.prec));
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::from_parts(self.p, &self.unit * &other.unit, self.val + other.val, prec)
    }

    /// Division; fails when the divisor is indistinguishable from zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        if other.is_zero() {
            return Err(Error::ZeroInput("division by a value indistinguishable from zero".into()));
        }
        if self.is_exact_zero() {
            return Ok(Self::exact_zero(self.p));
        }
        let vb = other.val;
        let la = self.valuation_bound();
        let prec = min(self.prec - vb, la - 2 * vb + other.prec);
        if self.is_zero() {
            return Ok(Self::zero(self.p, prec));
        }
        let v = self.val - vb;
        if v >= prec {
            return Ok(Self::zero(self.p, prec));
        }
        let m = p_pow(self.p, prec - v);
        let unit = (&self.unit * mod_inverse(&other.unit, &m)).mod_floor(&m);
        Ok(PadicNumber { p: self.p, val: v, unit, prec })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("inverse of a value indistinguishable from zero".into()));
        }
        let rel = self.prec - self.val;
        let m = p_pow(self.p, rel);
        Ok(PadicNumber { p: self.p, val: -self.val, unit: mod_inverse(&self.unit, &m), prec: rel - self.val })
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        if k.is_zero() || self.is_exact_zero() {
            return Self::exact_zero(self.p);
        }
        let mut kk = k.clone();
        let e = remove_p(&mut kk, self.p);
        if self.is_zero() {
            return Self::zero(self.p, self.prec + e);
        }
        Self::from_parts(self.p, &self.unit * kk, self.val + e, self.prec + e)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_int(&BigInt::from(k))
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "division by the integer zero");
        if self.is_exact_zero() {
            return self.clone();
        }
        let mut kk = k.clone();
        let e = remove_p(&mut kk, self.p);
        if self.is_zero() {
            return Self::zero(self.p, self.prec - e);
        }
        let rel = self.prec - self.val;
        let m = p_pow(self.p, rel);
        let unit = (&self.unit * mod_inverse(&kk, &m)).mod_floor(&m);
        PadicNumber { p: self.p, val: self.val - e, unit, prec: self.prec - e }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self.div_int(&BigInt::from(k))
    }

    /// Multiplication by an exact rational.
    pub fn mul_rational(&self, q: &BigRational) -> Self {
        self.mul_int(q.numer()).div_int(q.denom())
    }

    /// Multiplication by p^k (exact shift; k may be negative).
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, self.prec + k);
        }
        PadicNumber { p: self.p, val: self.val + k, unit: self.unit.clone(), prec: self.prec + k }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        // x^0 = 1, known to the precision of x (an exact zero base has no
        // finite precision to inherit, so one digit is reported).
        acc.unwrap_or_else(|| Self::one(self.p, if self.prec == INFINITE { 1 } else { self.prec.max(1) }))
    }

    /// Signed integer power; negative exponents require a nonzero base.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inverse()?.pow((-n) as u64))
        }
    }

    /// The value as a rational representative p^v·u.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        if self.val >= 0 {
            BigRational::from_integer(&self.unit * p_pow(self.p, self.val))
        } else {
            BigRational::new(self.unit.clone(), p_pow(self.p, -self.val))
        }
    }

    /// Representative in [0, p^N) of an integral value.
    pub fn lift_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * p_pow(self.p, self.val))
    }

    /// Representative in (−p^N/2, p^N/2] of an integral value.
    pub fn centered_integer(&self) -> Option<BigInt> {
        let x = self.lift_integer()?;
        if self.prec == INFINITE {
            return Some(x);
        }
        let m = p_pow(self.p, self.prec);
        let half = &m / 2;
        Some(if x > half { x - m } else { x })
    }

    /// The residue mod p of an integral value.
    pub fn residue(&self) -> Result<u32> {
        if self.valuation_bound() < 0 {
            return Err(Error::NotAUnit(format!("{} is not integral", self)));
        }
        if self.val > 0 || self.is_zero() {
            if self.prec < 1 {
                return Err(Error::PrecisionLoss("residue unknown below precision 1".into()));
            }
            return Ok(0);
        }
        Ok((&self.unit % self.p).to_u32().unwrap())
    }

    /// Base-p digits a_v..a_{N−1} of the expansion, starting at the valuation.
    pub fn digits(&self) -> Vec<u32> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut u = self.unit.clone();
        let pb = BigInt::from(self.p);
        for _ in 0..(self.prec - self.val) {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u32().unwrap());
            u = q;
        }
        out
    }

    /// Three-valued comparison.
    pub fn compare(&self, other: &Self) -> Comparison {
        if self.is_exact_zero() && other.is_exact_zero() {
            return Comparison::Equal;
        }
        let d = self - other;
        if d.is_zero() {
            Comparison::Indistinguishable
        } else {
            Comparison::Distinct
        }
    }

    /// True when the two values agree modulo p^min(N₁,N₂).
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.compare(other) != Comparison::Distinct
    }

    /// Exact digit equality: same valuation, precision and unit.
    pub fn identical(&self, other: &Self) -> bool {
        self.p == other.p && self.val == other.val && self.prec == other.prec && self.unit == other.unit
    }

    /// Square root of a value with even valuation and square unit part
    /// (p odd), choosing the root whose leading digit is `residue` if given.
    pub fn sqrt(&self, residue: Option<u32>) -> Result<Self> {
        let p = self.p;
        if p == 2 {
            return Err(Error::Invalid("square roots are only implemented for odd p".into()));
        }
        if self.is_zero() {
            let half = if self.prec == INFINITE { INFINITE } else { self.prec.div_euclid(2) };
            return Ok(if half == INFINITE { Self::exact_zero(p) } else { Self::zero(p, half) });
        }
        if self.val % 2 != 0 {
            return Err(Error::NotAUnit(format!("odd valuation {} has no square root", self.val)));
        }
        let rel = self.prec - self.val;
        let u0 = (&self.unit % p).to_u64().unwrap();
        let mut r0 = None;
        for r in 1..p as u64 {
            if (r * r) % p as u64 == u0 {
                r0 = Some(r);
                break;
            }
        }
        let mut r = r0.ok_or_else(|| Error::NotAUnit("unit part is not a square mod p".into()))?;
        if let Some(want) = residue {
            let want = want as u64 % p as u64;
            if want != r && want != (p as u64 - r) {
                return Err(Error::Invalid(format!("no square root with residue {want}")));
            }
            r = want;
        }
        let m = p_pow(p, rel);
        let mut x = BigInt::from(r);
        let two = BigInt::from(2);
        let mut known = 1i64;
        while known < rel {
            known = (2 * known).min(rel);
            let mk = p_pow(p, known);
            let fx = (&x * &x - &self.unit).mod_floor(&mk);
            let inv = mod_inverse(&(&two * &x), &mk);
            x = (&x - fx * inv).mod_floor(&mk);
        }
        x = x.mod_floor(&m);
        Ok(PadicNumber { p, val: self.val / 2, unit: x, prec: self.val / 2 + rel })
    }

    /// Teichmüller representative of a unit at absolute precision `prec`.
    pub fn teichmuller(&self, prec: i64) -> Result<Self> {
        if self.val != 0 {
            return Err(Error::NotAUnit(format!("{self}")));
        }
        let r = (&self.unit % self.p).to_u32().unwrap();
        Ok(teichmuller_of_residue(self.p, r, prec))
    }

    /// Sign-insensitive numeric ordering by valuation (smaller valuation is
    /// "larger" p-adically).
    pub fn cmp_size(&self, other: &Self) -> Ordering {
        other.valuation_bound().cmp(&self.valuation_bound())
    }

}

/// The (p−1)-th root of unity congruent to r mod p (0 for r ≡ 0).
pub fn teichmuller_of_residue(p: u32, r: u32, prec: i64) -> PadicNumber {
    let r = r % p;
    if r == 0 {
        return PadicNumber::exact_zero(p);
    }
    let prec = prec.max(1);
    let m = p_pow(p, prec);
    let pe = BigInt::from(p);
    let mut x = BigInt::from(r);
    for _ in 0..prec {
        x = x.modpow(&pe, &m);
    }
    PadicNumber::from_parts(p, x, 0, prec)
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for PadicNumber {
    /// Agreement modulo p^min(N₁,N₂). Not transitive.
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                $body(self, rhs)
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                $body(&self, &rhs)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                $body(&self, rhs)
            }
        }
        impl $tr<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &PadicNumber, b: &PadicNumber| a.add_impl(b));
binop!(Sub, sub, |a: &PadicNumber, b: &PadicNumber| a.add_impl(&b.neg_impl()));
binop!(Mul, mul, |a: &PadicNumber, b: &PadicNumber| a.mul_impl(b));

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

/// Sum of an iterator of p-adic numbers (exact zero when empty).
pub fn padic_sum<'a, I: IntoIterator<Item = &'a PadicNumber>>(p: u32, it: I) -> PadicNumber {
    let mut acc = PadicNumber::exact_zero(p);
    for x in it {
        acc = &acc + x;
    }
    acc
}

