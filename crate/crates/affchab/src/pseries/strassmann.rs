use num_bigint::BigInt;

use super::series::TruncatedSeries;
use crate::error::{Error, Result};
use crate::padic::{p_pow, PadicNumber, INFINITE};
use crate::qlinalg::fp;

/// A root of a series in Z_p, known to absolute precision `value.precision()`.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: PadicNumber,
    pub multiplicity: usize,
}

/// Roots in Z_p together with Strassmann's bound N* on their number.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    pub roots: Vec<Root>,
    pub bound: usize,
    /// The precision W to which the series was known on Z_p.
    pub precision: i64,
}

/// Index of the last coefficient of minimal valuation, and that valuation.
/// Coefficients below p^w count as zero.
pub fn strassmann_bound(coeffs: &[PadicNumber], w: i64) -> Option<(usize, i64)> {
    let mut best: Option<(usize, i64)> = None;
    for (n, c) in coeffs.iter().enumerate() {
        let v = c.valuation_bound();
        if v >= w {
            continue;
        }
        if best.is_none_or(|(_, m)| v <= m) {
            best = Some((n, v));
        }
    }
    best
}

/// Isolates the roots of f on Z_p.
///
/// With N* = 1 the unique root is found by Newton's method; with N* ≥ 2 the
/// disc is split into the sub-discs b + pZ_p over the roots b of the
/// reduction and the search recurses there. A sub-disc on which the series
/// vanishes identically at precision W cannot be decided and is reported as
/// `PrecisionLoss`.
pub fn strassmann_roots(f: &TruncatedSeries) -> Result<RootIsolation> {
    let w = f
        .certified_precision()
        .ok_or_else(|| Error::PrecisionLoss("series tail is unknown".into()))?;
    let coeffs: Vec<PadicNumber> = f.coeffs().iter().map(|c| c.reduce_precision(w)).collect();
    let (bound, _) = strassmann_bound(&coeffs, w).ok_or(Error::IndistinguishableFromZero)?;
    let mut roots = Vec::new();
    isolate(f.prime(), &coeffs, w, &mut |s| roots.push(s), &Affine::identity())?;
    roots.sort_by_key(|a| a.value.to_rational());
    Ok(RootIsolation { roots, bound, precision: w })
}

/// t = shift + p^scale·s, tracking how a sub-disc parameter maps back.
struct Affine {
    shift: BigInt,
    scale: i64,
}

impl Affine {
    fn identity() -> Self {
        Affine { shift: BigInt::from(0), scale: 0 }
    }

    fn then(&self, p: u32, b: u64) -> Self {
        Affine { shift: &self.shift + p_pow(p, self.scale) * BigInt::from(b), scale: self.scale + 1 }
    }

    fn apply(&self, p: u32, s: &PadicNumber) -> PadicNumber {
        let shift = PadicNumber::from_bigint(p, &self.shift, s.precision() + self.scale);
        &shift + &s.shift(self.scale)
    }
}

fn isolate(p: u32, coeffs: &[PadicNumber], w: i64, out: &mut dyn FnMut(Root), map: &Affine) -> Result<()> {
    let Some((nstar, m)) = strassmann_bound(coeffs, w) else {
        return Err(Error::PrecisionLoss(format!(
            "series vanishes to precision {w} on a sub-disc; a multiple root cannot be certified simple"
        )));
    };
    match nstar {
        0 => Ok(()),
        1 => {
            let s = newton_simple(p, coeffs, m, w)?;
            out(Root { value: map.apply(p, &s), multiplicity: 1 });
            Ok(())
        }
        _ => {
            let reduced: Vec<u64> = coeffs
                .iter()
                .map(|c| if c.valuation_bound() > m { 0 } else { c.shift(-m).residue().unwrap_or(0) as u64 })
                .collect();
            for b in fp::roots(&reduced, p as u64) {
                let sub = taylor_shift(p, coeffs, b, w);
                isolate(p, &sub, w, out, &map.then(p, b))?;
            }
            Ok(())
        }
    }
}

/// Coefficients of F(b + p·s), all known modulo p^w.
fn taylor_shift(p: u32, coeffs: &[PadicNumber], b: u64, w: i64) -> Vec<PadicNumber> {
    let n = coeffs.len();
    let mut c: Vec<PadicNumber> = coeffs.to_vec();
    let bb = PadicNumber::from_int(p, b as i64, w.max(1) + 1);
    // synthetic division by (t − b), repeated, gives the Taylor coefficients at b
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let add = &c[j + 1] * &bb;
            c[j] = &c[j] + &add;
        }
    }
    c.into_iter()
        .enumerate()
        .map(|(k, x)| x.shift(k as i64).reduce_precision(w))
        .collect()
}

/// The unique root of Σ c_n s^n in Z_p when the last coefficient of minimal
/// valuation m sits at index 1.
fn newton_simple(p: u32, coeffs: &[PadicNumber], m: i64, w: i64) -> Result<PadicNumber> {
    let target = w - m;
    let g: Vec<PadicNumber> = coeffs.iter().map(|c| c.reduce_precision(w).shift(-m)).collect();
    let dg: Vec<PadicNumber> = g.iter().enumerate().skip(1).map(|(n, c)| c.mul_i64(n as i64)).collect();
    let eval = |poly: &[PadicNumber], x: &PadicNumber| {
        poly.iter().rev().fold(PadicNumber::exact_zero(p), |acc, c| &(&acc * x) + c)
    };
    let g0 = if g[0].valuation_bound() > 0 { 0 } else { g[0].residue()? as u64 };
    let g1 = g[1].residue()? as u64;
    let pp = p as u64;
    let s0 = (pp - g0 % pp) % pp * fp::inv(g1, pp) % pp;
    let mut s = PadicNumber::from_int(p, s0 as i64, target.max(1));
    let mut known = 1;
    while known < target {
        let step = eval(&g, &s).div(&eval(&dg, &s))?;
        s = (&s - &step).reduce_precision(target);
        known *= 2;
    }
    if s.precision() == INFINITE {
        s = s.reduce_precision(target);
    }
    Ok(s)
}
