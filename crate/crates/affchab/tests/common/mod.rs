//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use affchab::padic::PadicNumber;
use affchab::pseries::{Root, TruncatedSeries};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub fn mul_polys(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Π (t − r), constant term first.
pub fn poly_from_roots(roots: &[i64]) -> Vec<BigInt> {
    roots.iter().fold(vec![BigInt::from(1)], |acc, &r| mul_polys(&acc, &[BigInt::from(-r), BigInt::from(1)]))
}

pub fn mul_int_polys(a: &[BigInt], b: &[i64]) -> Vec<BigInt> {
    mul_polys(a, &b.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

pub fn series_from(c: &[BigInt], p: u32, prec: i64) -> TruncatedSeries {
    TruncatedSeries::polynomial(p, c.iter().map(|x| PadicNumber::from_bigint(p, x, prec)).collect())
}

/// All x mod p^n with f(x) ≡ 0 mod p^n.
pub fn brute_force_zeros(c: &[BigInt], p: u64, n: u32) -> BTreeSet<u64> {
    let m = p.pow(n);
    let big_m = BigInt::from(m);
    let red: Vec<u128> = c.iter().map(|x| x.mod_floor(&big_m).to_u128().unwrap()).collect();
    let m = m as u128;
    (0..m)
        .filter(|&x| red.iter().rev().fold(0u128, |acc, &k| (acc * x + k) % m) == 0)
        .map(|x| x as u64)
        .collect()
}

/// The residues mod p^n of everything congruent to a reported root at its
/// precision.
pub fn classes_of(roots: &[Root], p: u64, n: u32) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for r in roots {
        let k = r.value.precision().min(n as i64) as u32;
        let pk = p.pow(k);
        let base = r.value.lift_integer().map(|x| x.mod_floor(&BigInt::from(pk)).to_u64().unwrap()).unwrap_or(0);
        for j in 0..p.pow(n - k) {
            out.insert(base + j * pk);
        }
    }
    out
}

use affchab::curvegeom::{CurveProblem, Family, Point, RationalPoint};
use affchab::padic::{hensel_embed, newton_lift, PadicPoly};
use affchab::qlinalg::{fp, rat, QPoly};
use num_rational::BigRational;
use rand::Rng;

pub const SEXTIC: [i64; 7] = [9, 20, 2, -18, -7, 2, 1];

pub fn sextic_problem(prec: i64) -> CurveProblem {
    CurveProblem::new(
        Family::Hyperelliptic { f: QPoly::from_ints(&SEXTIC) },
        RationalPoint::from_ints(-1, 1),
        vec![],
        7,
        prec,
        2,
    )
    .unwrap()
}

pub fn superelliptic_problem(prec: i64) -> CurveProblem {
    CurveProblem::new(Family::Superelliptic { a: 1.into() }, RationalPoint::from_ints(0, 0), vec![487], 7, prec, 1).unwrap()
}

pub fn sextic_known_points() -> Vec<(i64, i64)> {
    vec![(-1, 1), (-1, -1), (0, 3), (0, -3), (1, 3), (1, -3), (-2, 3), (-2, -3), (-4, 37), (-4, -37)]
}

/// The simple roots in Z_p of a rational polynomial with unit leading
/// coefficient, or None when some root is not simple mod p or not integral.
pub fn split_roots(q: &QPoly, p: u32, prec: i64) -> Option<Vec<PadicNumber>> {
    let qp = PadicPoly::from_qpoly(q, p, prec + 4);
    let red = q.reduce_mod(p)?;
    if red.len() as i64 != q.degree() + 1 {
        return None;
    }
    let roots = fp::roots(&red, p as u64);
    if roots.len() as i64 != q.degree() {
        return None;
    }
    let d = qp.derivative();
    roots
        .into_iter()
        .map(|r| newton_lift(&qp, &d, PadicNumber::from_int(p, r as i64, prec), prec).ok())
        .collect()
}

/// Lagrange interpolation through (x_i, y_i).
pub fn interpolate(pts: &[(i64, i64)]) -> QPoly {
    let mut g = QPoly::zero();
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        let mut term = QPoly::constant(rat(yi));
        for (j, &(xj, _)) in pts.iter().enumerate() {
            if i != j {
                let lin = QPoly::new(vec![rat(-xj), rat(1)]);
                term = qmul(&term, &lin).scale(&(BigRational::from_integer(1.into()) / rat(xi - xj)));
            }
        }
        g = qadd(&g, &term);
    }
    g
}

pub fn qmul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() || b.is_zero() {
        return QPoly::zero();
    }
    let mut c = vec![rat(0); a.coeffs().len() + b.coeffs().len() - 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    QPoly::new(c)
}

pub fn qadd(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.coeffs().len().max(b.coeffs().len());
    QPoly::new((0..n).map(|i| a.coeff(i) + b.coeff(i)).collect())
}

pub fn qsub(a: &QPoly, b: &QPoly) -> QPoly {
    qadd(a, &b.scale(&rat(-1)))
}

/// A principal divisor on the sextic with known cusp values: F = (y − g(x))/(x − c)³
/// with g the cubic through four known points of distinct x. Returns the
/// divisor and F(∞₊), F(∞₋).
pub fn sextic_principal_divisor<R: Rng>(rng: &mut R, prec: i64) -> Option<(Vec<(i64, Point)>, Vec<Vec<PadicNumber>>)> {
    let p = 7;
    let known = sextic_known_points();
    let c = [0i64, 1, -1][rng.gen_range(0..3)];
    let mut xs: Vec<i64> = vec![-1, 0, 1, -2, -4].into_iter().filter(|&x| x != c).collect();
    while xs.len() > 4 {
        xs.remove(rng.gen_range(0..xs.len()));
    }
    let pts: Vec<(i64, i64)> = xs
        .iter()
        .map(|&x| {
            let ys: Vec<i64> = known.iter().filter(|k| k.0 == x).map(|k| k.1).collect();
            (x, ys[rng.gen_range(0..ys.len())])
        })
        .collect();
    let g = interpolate(&pts);
    let lam = g.coeff(3);
    if lam == rat(1) || lam == rat(-1) || g.degree() < 3 {
        return None;
    }
    let f = QPoly::from_ints(&SEXTIC);
    let h = qsub(&f, &qmul(&g, &g));
    let known_factor = xs.iter().fold(QPoly::constant(rat(1)), |acc, &x| qmul(&acc, &QPoly::new(vec![rat(-x), rat(1)])));
    let (quad, rem) = h.div_rem(&known_factor);
    assert!(rem.is_zero());
    let extra = split_roots(&quad, p, prec + 6)?;
    let mut div: Vec<(i64, Point)> = pts
        .iter()
        .map(|&(x, y)| (1, Point::from_rationals(p, &rat(x), &rat(y), prec + 6)))
        .collect();
    for r in extra {
        let y = g.eval_padic(&r, prec + 6);
        div.push((1, Point::new(r, y)));
    }
    let fc = f.eval(&rat(c));
    let yc = num_integer::Roots::sqrt(&fc.to_integer());
    div.push((-3, Point::from_rationals(p, &rat(c), &BigRational::from_integer(yc.clone()), prec + 6)));
    div.push((-3, Point::from_rationals(p, &rat(c), &BigRational::from_integer(-yc), prec + 6)));
    let one = rat(1);
    let vals = vec![
        vec![PadicNumber::from_rational(p, &(&one - &lam), prec + 6)],
        vec![PadicNumber::from_rational(p, &(-&one - &lam), prec + 6)],
    ];
    Some((div, vals))
}

/// A principal divisor on y³ = x³ + x² + x: F = (y − λx − μ)/(x − c), with
/// F = η − λ at the cusp where y/x → η. Returns None unless every zero and
/// pole is a Z_7-point outside the restricted discs.
pub fn superelliptic_principal_divisor<R: Rng>(rng: &mut R, prec: i64) -> Option<(Vec<(i64, Point)>, Vec<Vec<PadicNumber>>)> {
    let p = 7u32;
    let w = prec + 6;
    let lam = rng.gen_range(-6i64..7);
    let mu = rng.gen_range(-6i64..7);
    let c = rng.gen_range(-20i64..21);
    if (lam.pow(3) - 1).rem_euclid(7) == 0 || c.rem_euclid(7) == 0 || c.rem_euclid(7) == 6 {
        return None;
    }
    // (λx + μ)³ − (x³ + x² + x)
    let cubic = QPoly::new(vec![rat(mu.pow(3)), rat(3 * lam * mu * mu - 1), rat(3 * lam * lam * mu - 1), rat(lam.pow(3) - 1)]);
    let roots = split_roots(&cubic, p, w)?;
    let mut div = Vec::new();
    for r in roots {
        if r.residue().ok()? == 6 {
            return None;
        }
        let y = &r.mul_i64(lam) + &PadicNumber::from_int(p, mu, w);
        div.push((1, Point::new(r, y)));
    }
    let fc = c * c * c + c * c + c;
    let cube = QPoly::new(vec![rat(-fc), rat(0), rat(0), rat(1)]);
    let ys = split_roots(&cube, p, w)?;
    for y in ys {
        div.push((-1, Point::new(PadicNumber::from_int(p, c, w), y)));
    }
    let q2 = hensel_embed(&QPoly::from_ints(&[1, 1, 1]), p, w).ok()?;
    let lam_p = PadicNumber::from_int(p, lam, w);
    let vals = vec![
        vec![PadicNumber::from_int(p, 1 - lam, w)],
        q2.iter().map(|phi| phi.root() - &lam_p).collect(),
    ];
    Some((div, vals))
}

use affchab::cli::{LoadedProblem, ProblemFile};

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> ProblemFile {
    ProblemFile::read(&fixture_path(name)).unwrap()
}

pub fn loaded(name: &str) -> LoadedProblem {
    fixture(name).load(None, None).unwrap()
}

/// M·v over the integers, written out so tests do not lean on the library.
pub fn mat_vec(m: &[Vec<i64>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(rat(0), |acc, (a, x)| acc + BigRational::from_integer((*a).into()) * x))
        .collect()
}

/// log(1+z) summed naively with exact rationals, reduced mod p^prec.
pub fn log_oracle(p: u32, z: &BigRational, prec: i64) -> PadicNumber {
    let mut acc = BigRational::from_integer(0.into());
    let mut pw = z.clone();
    for k in 1..(4 * prec + 20) {
        let term = &pw / BigRational::from_integer(k.into());
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
        pw *= z;
    }
    PadicNumber::from_rational(p, &acc, prec)
}
