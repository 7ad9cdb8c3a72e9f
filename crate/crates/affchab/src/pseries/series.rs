use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{ilog, PadicNumber, INFINITE};

/// What is known about the coefficients past the truncation order T.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// They are exactly zero (the series is a polynomial).
    Exact,
    /// v(c_n) ≥ offset + slope·n − log_loss·⌊log_p n⌋ for every n ≥ T.
    Growth { offset: i64, slope: i64, log_loss: i64 },
    /// Nothing is known.
    Unknown,
}

/// A power series Σ c_n t^n over Q_p known modulo (p^W, t^T).
#[derive(Clone)]
pub struct TruncatedSeries {
    p: u32,
    coeffs: Vec<PadicNumber>,
    tail: Tail,
}

fn growth_at(p: u32, offset: i64, slope: i64, log_loss: i64, n: usize) -> i64 {
    offset + slope * n as i64 - log_loss * ilog(p, (n as i64).max(1))
}

impl TruncatedSeries {
    pub fn new(p: u32, coeffs: Vec<PadicNumber>, tail: Tail) -> Self {
        TruncatedSeries { p, coeffs, tail }
    }

    /// The polynomial Σ c_n t^n with an exact (zero) tail.
    pub fn polynomial(p: u32, coeffs: Vec<PadicNumber>) -> Self {
        Self::new(p, coeffs, Tail::Exact)
    }

    pub fn constant(c: PadicNumber) -> Self {
        let p = c.prime();
        Self::polynomial(p, vec![c])
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Truncation order T.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    /// Coefficient n; indices at or beyond T are an error.
    pub fn coeff(&self, n: usize) -> Result<&PadicNumber> {
        self.coeffs
            .get(n)
            .ok_or_else(|| Error::Invalid(format!("coefficient {n} is beyond the truncation order {}", self.order())))
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    /// Lower bound for v(c_n), n ≥ T (INFINITE for an exact tail).
    pub fn tail_bound(&self, n: usize) -> Option<i64> {
        match self.tail {
            Tail::Exact => Some(INFINITE),
            Tail::Growth { offset, slope, log_loss } => Some(growth_at(self.p, offset, slope, log_loss, n)),
            Tail::Unknown => None,
        }
    }

    /// min over k ≥ n of the tail bound (None if unbounded below or unknown).
    pub fn tail_min_from(&self, n: usize) -> Option<i64> {
        match self.tail {
            Tail::Exact => Some(INFINITE),
            Tail::Unknown => None,
            Tail::Growth { offset, slope, log_loss } => {
                Some(offset + min_linear_minus_log(self.p, slope, log_loss, n)?)
            }
        }
    }

    /// Smallest absolute precision among the stored coefficients.
    pub fn coefficient_precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(INFINITE)
    }

    /// W such that the series is known modulo p^W on the whole of Z_p.
    pub fn certified_precision(&self) -> Option<i64> {
        Some(self.coefficient_precision().min(self.tail_min_from(self.order())?))
    }

    /// Offset o such that v(c_n) ≥ o + slope·n − log_loss·⌊log_p n⌋ for
    /// every n, stored coefficients included.
    pub fn effective_offset(&self, slope: i64, log_loss: i64) -> Option<i64> {
        let mut o = match self.tail {
            Tail::Exact => INFINITE,
            Tail::Unknown => return None,
            Tail::Growth { offset, slope: s, log_loss: l } => {
                offset + min_linear_minus_log(self.p, s - slope, l - log_loss, self.order())?
            }
        };
        for (n, c) in self.coeffs.iter().enumerate() {
            let v = c.valuation_bound();
            if v == INFINITE {
                continue;
            }
            o = o.min(v - slope * n as i64 + log_loss * ilog(self.p, (n as i64).max(1)));
        }
        Some(o)
    }

    /// Keeps the first `t` coefficients, folding the dropped ones into the
    /// tail bound.
    pub fn truncate(&self, t: usize) -> Self {
        if t >= self.order() {
            return self.clone();
        }
        let dropped = &self.coeffs[t..];
        let tail = match self.tail {
            Tail::Unknown => Tail::Unknown,
            Tail::Exact => {
                let o = dropped.iter().map(|c| c.valuation_bound()).min().unwrap_or(INFINITE);
                if o == INFINITE {
                    Tail::Exact
                } else {
                    Tail::Growth { offset: o, slope: 0, log_loss: 0 }
                }
            }
            Tail::Growth { offset, slope, log_loss } => {
                let mut o = offset;
                for (i, c) in dropped.iter().enumerate() {
                    let n = t + i;
                    let v = c.valuation_bound();
                    if v != INFINITE {
                        o = o.min(v - slope * n as i64 + log_loss * ilog(self.p, (n as i64).max(1)));
                    }
                }
                Tail::Growth { offset: o, slope, log_loss }
            }
        };
        Self::new(self.p, self.coeffs[..t].to_vec(), tail)
    }

    /// Exact series are padded with zeros up to `t`; others are truncated.
    pub fn resized(&self, t: usize) -> Self {
        if t <= self.order() || self.tail != Tail::Exact {
            return self.truncate(t);
        }
        let mut c = self.coeffs.clone();
        c.resize(t, PadicNumber::exact_zero(self.p));
        Self::new(self.p, c, Tail::Exact)
    }

    fn combine_tails(a: Tail, b: Tail) -> Tail {
        match (a, b) {
            (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
            (Tail::Exact, t) | (t, Tail::Exact) => t,
            (
                Tail::Growth { offset: o1, slope: s1, log_loss: l1 },
                Tail::Growth { offset: o2, slope: s2, log_loss: l2 },
            ) => Tail::Growth { offset: o1.min(o2), slope: s1.min(s2), log_loss: l1.max(l2) },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        // an exact series can be padded with zeros to any order
        let t = match (self.tail, o.tail) {
            (Tail::Exact, Tail::Exact) => self.order().max(o.order()),
            (Tail::Exact, _) => o.order(),
            (_, Tail::Exact) => self.order(),
            _ => self.order().min(o.order()),
        };
        let (a, b) = (self.resized(t), o.resized(t));
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Self::new(self.p, coeffs, Self::combine_tails(a.tail, b.tail))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|c| -c).collect(), self.tail)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        let tail = match self.tail {
            Tail::Growth { offset, slope, log_loss } if !c.is_exact_zero() => {
                Tail::Growth { offset: offset.saturating_add(c.valuation_bound()), slope, log_loss }
            }
            Tail::Unknown if !c.is_exact_zero() => Tail::Unknown,
            _ => Tail::Exact,
        };
        Self::new(self.p, coeffs, tail)
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul_rational(q)).collect();
        let v = crate::padic::rational_valuation(q, self.p);
        let tail = match self.tail {
            Tail::Growth { offset, slope, log_loss } => {
                Tail::Growth { offset: offset.saturating_add(v), slope, log_loss }
            }
            t => t,
        };
        Self::new(self.p, coeffs, tail)
    }

    /// Product. Polynomials multiply exactly; otherwise the result keeps the
    /// smaller truncation order.
    pub fn mul(&self, o: &Self) -> Self {
        if self.tail == Tail::Exact && o.tail == Tail::Exact {
            if self.coeffs.is_empty() || o.coeffs.is_empty() {
                return Self::polynomial(self.p, vec![]);
            }
            let n = self.order() + o.order() - 1;
            return Self::polynomial(self.p, convolve(self.p, &self.coeffs, &o.coeffs, n));
        }
        let t = self.order().min(o.order());
        let coeffs = convolve(self.p, &self.coeffs, &o.coeffs, t);
        let (s, l) = match (self.tail, o.tail) {
            (Tail::Growth { slope: s1, log_loss: l1, .. }, Tail::Growth { slope: s2, log_loss: l2, .. }) => {
                (s1.min(s2), l1 + l2)
            }
            (Tail::Growth { slope, log_loss, .. }, Tail::Exact) | (Tail::Exact, Tail::Growth { slope, log_loss, .. }) => {
                (slope, log_loss)
            }
            _ => return Self::new(self.p, coeffs, Tail::Unknown),
        };
        let tail = match (self.effective_offset(s, l), o.effective_offset(s, l)) {
            (Some(a), Some(b)) if a != INFINITE && b != INFINITE => Tail::Growth { offset: a + b, slope: s, log_loss: l },
            (Some(_), Some(_)) => Tail::Exact,
            _ => Tail::Unknown,
        };
        Self::new(self.p, coeffs, tail)
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![PadicNumber::exact_zero(self.p); k];
        c.extend(self.coeffs.iter().cloned());
        let tail = match self.tail {
            Tail::Growth { offset, slope, log_loss } => {
                Tail::Growth { offset: offset - slope * k as i64 - log_loss, slope, log_loss }
            }
            t => t,
        };
        Self::new(self.p, c, tail)
    }

    /// Σ (n+1)c_{n+1} t^n.
    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c.mul_i64(n as i64)).collect();
        let tail = match self.tail {
            Tail::Growth { offset, slope, log_loss } => {
                Tail::Growth { offset: offset + slope - log_loss, slope, log_loss }
            }
            t => t,
        };
        Self::new(self.p, coeffs, tail)
    }

    /// Σ c_n t^{n+1}/(n+1), with constant term 0.
    pub fn formal_antiderivative(&self) -> Self {
        let mut coeffs = vec![PadicNumber::exact_zero(self.p)];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.div_int(&BigInt::from(n + 1)));
        }
        let tail = match self.tail {
            Tail::Growth { offset, slope, log_loss } => {
                Tail::Growth { offset: offset - slope, slope, log_loss: log_loss + 1 }
            }
            t => t,
        };
        Self::new(self.p, coeffs, tail)
    }

    /// f(x) for integral x, with the tail folded into the precision.
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        if x.valuation_bound() < 0 {
            return Err(Error::DivergentSubstitution(format!("evaluation at non-integral {x}")));
        }
        let cap = self
            .tail_min_from(self.order())
            .ok_or_else(|| Error::PrecisionLoss("series tail is unknown".into()))?;
        let mut acc = PadicNumber::exact_zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc.reduce_precision(cap))
    }

    /// Composition f∘g for integral g with v(g(0)) ≥ 1.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let g0 = g.coeff(0)?;
        if g0.valuation_bound() < 1 {
            return Err(Error::DivergentSubstitution(format!("g(0) = {g0} is not divisible by p")));
        }
        if g.coeffs.iter().any(|c| c.valuation_bound() < 0) {
            return Err(Error::DivergentSubstitution("g has non-integral coefficients".into()));
        }
        if g0.is_exact_zero() {
            let t = self.order().min(g.order());
            let gt = g.truncate(t);
            let mut acc = vec![PadicNumber::exact_zero(self.p); t];
            for c in self.coeffs[..t].iter().rev() {
                acc = convolve(self.p, &acc, &gt.coeffs, t);
                acc[0] = &acc[0] + c;
            }
            return Ok(Self::new(self.p, acc, Tail::Unknown));
        }
        let t = g.order();
        let tf = self.order();
        let v0 = g0.valuation_bound().min(INFINITE / 4);
        let mu = g.coeffs[1..].iter().map(|c| c.valuation_bound()).min().unwrap_or(INFINITE).min(INFINITE / 4);
        let mut caps = vec![INFINITE; t];
        if self.tail != Tail::Exact {
            for (n, cap) in caps.iter_mut().enumerate() {
                // coefficient n of g^k picks at most n non-constant factors
                let mut best = INFINITE;
                for k in tf..tf + t + 64 {
                    let b = self
                        .tail_bound(k)
                        .ok_or_else(|| Error::PrecisionLoss("composition with an unknown tail".into()))?;
                    let gk = (0..=n.min(k) as i64).map(|j| (k as i64 - j) * v0 + j * mu).min().unwrap_or(0);
                    best = best.min(b.saturating_add(gk));
                }
                *cap = best;
            }
        }
        let mut acc = vec![PadicNumber::exact_zero(self.p); t];
        for c in self.coeffs.iter().rev() {
            acc = convolve(self.p, &acc, &g.coeffs, t);
            acc[0] = &acc[0] + c;
        }
        let acc = acc.into_iter().zip(caps).map(|(c, cap)| c.reduce_precision(cap)).collect();
        Ok(Self::new(self.p, acc, Tail::Unknown))
    }

    /// Inverse of a series with unit constant term, to the same order.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeff(0)?;
        if !a0.is_unit() {
            return Err(Error::NotAUnit(format!("constant term {a0}")));
        }
        let inv0 = a0.inverse()?;
        let t = self.order();
        let mut b: Vec<PadicNumber> = vec![inv0.clone()];
        for n in 1..t {
            let mut s = PadicNumber::exact_zero(self.p);
            for i in 1..=n {
                s = &s + &(&self.coeffs[i] * &b[n - i]);
            }
            b.push(-(&s * &inv0));
        }
        Ok(Self::new(self.p, b, Tail::Unknown))
    }

    /// Binomial series (1+z)^r = Σ binom(r,k) z^k for p-integral r, as a
    /// series in z with `order` terms at precision `prec`.
    pub fn binomial(p: u32, r: &BigRational, order: usize, prec: i64) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        let mut b = BigRational::one();
        for k in 0..order {
            coeffs.push(PadicNumber::from_rational(p, &b, prec));
            b = b * (r - BigRational::from_integer(k.into())) / BigRational::from_integer((k + 1).into());
        }
        let tail = if r.is_integer() && r >= &BigRational::zero() && r.to_integer() < BigInt::from(order) {
            Tail::Exact
        } else {
            Tail::Growth { offset: 0, slope: 0, log_loss: 0 }
        };
        Self::new(p, coeffs, tail)
    }

    /// Largest certified W-free digit rendering, e.g. "(7 + 3*7^2)t + O(7^3, t^3)".
    pub fn render(&self, shown_prec: i64, terms: usize) -> String {
        let mut parts = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate().take(terms) {
            let c = c.reduce_precision(shown_prec);
            if c.is_zero() {
                continue;
            }
            let body = c.to_string();
            let body = body.rsplit_once(" + O(").map_or(body.clone(), |(b, _)| b.to_string());
            parts.push(match n {
                0 => body,
                1 => format!("({body})t"),
                _ => format!("({body})t^{n}"),
            });
        }
        parts.push(format!("O({}^{}, t^{})", self.p, shown_prec, terms.min(self.order())));
        parts.join(" + ")
    }
}

/// min over k ≥ n of a·k − b·⌊log_p k⌋, or None when it is unbounded below.
fn min_linear_minus_log(p: u32, a: i64, b: i64, n: usize) -> Option<i64> {
    let at = |k: i64| a * k - b * ilog(p, k.max(1));
    if a < 0 || (a == 0 && b > 0) {
        return None;
    }
    let n = n as i64;
    if b <= 0 {
        return Some(at(n));
    }
    // a·k − b·⌊log_p k⌋ only drops where the logarithm jumps, at powers of p
    let mut best = at(n);
    let mut pk: i64 = 1;
    for _ in 0..62 {
        pk = match pk.checked_mul(p as i64) {
            Some(x) => x,
            None => break,
        };
        if pk <= n {
            continue;
        }
        best = best.min(at(pk));
        if a.saturating_mul(pk).saturating_mul(p as i64 - 1) > b {
            break;
        }
    }
    Some(best)
}

/// First `n` coefficients of the product of two coefficient vectors.
fn convolve(p: u32, a: &[PadicNumber], b: &[PadicNumber], n: usize) -> Vec<PadicNumber> {
    let mut out = vec![PadicNumber::exact_zero(p); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if y.is_exact_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.certified_precision().unwrap_or(self.coefficient_precision());
        write!(f, "{} [tail {:?}]", self.render(shown, self.order()), self.tail)
    }
}
