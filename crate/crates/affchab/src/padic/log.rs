use num_bigint::BigInt;

use super::number::{PadicNumber, INFINITE};
use crate::error::{Error, Result};

/// log(1+z) = Σ (−1)^{k+1} z^k/k for v(z) ≥ 1, to absolute precision `prec`.
pub(crate) fn log_one_plus(z: &PadicNumber, prec: i64) -> PadicNumber {
    let p = z.prime();
    if z.is_exact_zero() {
        return PadicNumber::exact_zero(p);
    }
    let prec = prec.min(z.precision());
    let vz = z.valuation_bound();
    debug_assert!(vz >= 1);
    let mut acc = PadicNumber::zero(p, prec);
    if z.is_zero() {
        return acc;
    }
    let mut power = z.clone();
    let mut k: i64 = 1;
    loop {
        // every later term has valuation ≥ k·v(z) − log_p(k)
        let lower = k * vz - ilog(p, k);
        if lower >= prec && k > 1 {
            let mut tail_ok = true;
            for j in k..k + 4 {
                if j * vz - ilog(p, j) < prec {
                    tail_ok = false;
                }
            }
            if tail_ok {
                break;
            }
        }
        let term = power.div_int(&BigInt::from(k));
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
        power = &power * z;
        k += 1;
    }
    acc.reduce_precision(prec)
}

/// ⌊log_p k⌋ for k ≥ 1.
pub fn ilog(p: u32, k: i64) -> i64 {
    let mut e = 0;
    let mut x = k;
    while x >= p as i64 {
        x /= p as i64;
        e += 1;
    }
    e
}

/// Iwasawa-branch logarithm (log p = 0).
///
/// Strips p^v and the Teichmüller factor, then sums the series of log(1+z).
/// For p = 2 the unit is squared first so that the series converges fast.
pub fn iwasawa_log(x: &PadicNumber) -> Result<PadicNumber> {
    if x.is_zero() {
        return Err(Error::ZeroInput(format!("log of {x}")));
    }
    let p = x.prime();
    let rel = x.relative_precision();
    let u = PadicNumber::from_unit_parts(p, 0, x.unit().clone(), rel);
    if p == 2 {
        let u2 = &u * &u;
        let z = &u2 - &PadicNumber::one(2, INFINITE / 4);
        let l = log_one_plus(&z, rel + 1);
        return Ok(l.div_i64(2).reduce_precision(rel));
    }
    let w = u.teichmuller(rel)?;
    let z = &u.div(&w)? - &PadicNumber::one(p, rel);
    Ok(log_one_plus(&z, rel))
}

/// Truncated exponential-free helper: log of an element of 1 + pZ_p.
pub fn log_principal_unit(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let one = PadicNumber::one(p, x.precision());
    let z = x - &one;
    if z.valuation_bound() < 1 {
        return Err(Error::Invalid(format!("{x} is not a principal unit")));
    }
    Ok(log_one_plus(&z, x.precision()))
}
