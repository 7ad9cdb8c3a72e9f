//! Digit-string form "a₀ + a₁·p + … + O(p^N)", written in ASCII as
//! `2*7 + 5*7^2 + O(7^6)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::number::{p_pow, PadicNumber};
use crate::error::Error;

fn power_term(p: u32, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => format!("{p}"),
        _ => format!("{p}^{e}"),
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime();
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        if !self.is_zero() {
            for (i, d) in self.digits().iter().enumerate() {
                if *d == 0 {
                    continue;
                }
                let e = self.valuation() + i as i64;
                let pt = power_term(p, e);
                terms.push(match (d, pt.is_empty()) {
                    (_, true) => format!("{d}"),
                    (1, false) => pt,
                    (_, false) => format!("{d}*{pt}"),
                });
            }
        }
        terms.push(format!("O({p}^{})", self.precision()));
        write!(f, "{}", terms.join(" + "))
    }
}

/// Parses the display format back. Accepts `*` or `·` for products and
/// arbitrary nonnegative integer coefficients.
pub fn parse_padic(s: &str, p_hint: Option<u32>) -> Result<PadicNumber, Error> {
    let cleaned = s.replace('·', "*").replace(' ', "");
    if cleaned.is_empty() {
        return Err(Error::Invalid("empty p-adic literal".into()));
    }
    let mut p: Option<u32> = p_hint;
    let mut prec: Option<i64> = None;
    let mut terms: Vec<(BigInt, Option<(u32, i64)>)> = Vec::new();
    for raw in cleaned.split('+') {
        if raw.is_empty() {
            return Err(Error::Invalid(format!("malformed p-adic literal '{s}'")));
        }
        if let Some(inner) = raw.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let (base, exp) = parse_power(inner, s)?;
            p = Some(check_prime(p, base, s)?);
            prec = Some(exp);
            continue;
        }
        let (coef, pw) = match raw.split_once('*') {
            Some((c, rest)) => (parse_int(c, s)?, Some(parse_power(rest, s)?)),
            None => {
                if raw.contains('^') {
                    (BigInt::from(1), Some(parse_power(raw, s)?))
                } else {
                    (parse_int(raw, s)?, None)
                }
            }
        };
        terms.push((coef, pw));
    }
    let p = p.ok_or_else(|| Error::Invalid(format!("cannot infer p from '{s}'")))?;
    let prec = prec.ok_or_else(|| Error::Invalid(format!("missing O(p^N) term in '{s}'")))?;
    let mut value = BigRational::zero();
    for (c, pw) in terms {
        let e = match pw {
            None => 0,
            Some((b, _)) if b != p => {
                return Err(Error::Invalid(format!("term base {b} differs from p = {p} in '{s}'")));
            }
            Some((_, e)) => e,
        };
        let scale = if e >= 0 {
            BigRational::from_integer(p_pow(p, e))
        } else {
            BigRational::new(BigInt::from(1), p_pow(p, -e))
        };
        value += BigRational::from_integer(c) * scale;
    }
    if value.is_zero() {
        return Ok(PadicNumber::zero(p, prec));
    }
    Ok(PadicNumber::from_rational(p, &value, prec))
}

fn check_prime(p: Option<u32>, base: u32, s: &str) -> Result<u32, Error> {
    match p {
        Some(q) if q != base => Err(Error::Invalid(format!("prime mismatch in '{s}'"))),
        _ => Ok(base),
    }
}

fn parse_int(t: &str, s: &str) -> Result<BigInt, Error> {
    BigInt::from_str(t).map_err(|_| Error::Invalid(format!("bad coefficient '{t}' in '{s}'")))
}

fn parse_power(t: &str, s: &str) -> Result<(u32, i64), Error> {
    let (b, e) = match t.split_once('^') {
        Some((b, e)) => (b, e.trim_start_matches('(').trim_end_matches(')')),
        None => (t, "1"),
    };
    let b = b.parse::<u32>().map_err(|_| Error::Invalid(format!("bad base '{b}' in '{s}'")))?;
    let e = e.parse::<i64>().map_err(|_| Error::Invalid(format!("bad exponent '{e}' in '{s}'")))?;
    Ok((b, e))
}

impl FromStr for PadicNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_padic(s, None)
    }
}
