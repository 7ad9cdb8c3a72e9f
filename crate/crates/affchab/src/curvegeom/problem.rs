use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{FieldEmbedding, PadicNumber};
use crate::qlinalg::{fp, rat, NumberField, QPoly};

/// Which built-in family a curve belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// y² = f(x) with the cusps at infinity removed.
    Hyperelliptic { f: QPoly },
    /// y³ = x³ + a·x² + x with its three points at infinity removed.
    Superelliptic { a: BigInt },
}

/// A closed point of the boundary divisor.
#[derive(Clone, Debug)]
pub struct Cusp {
    pub name: String,
    pub field: NumberField,
    pub real_places: usize,
    pub complex_places: usize,
}

impl Cusp {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RationalPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RationalPoint { x: rat(x), y: rat(y) }
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A validated curve together with the arithmetic data of one run.
#[derive(Clone, Debug)]
pub struct CurveProblem {
    pub family: Family,
    pub genus: usize,
    /// Leading coefficient d of f (1 for the superelliptic family).
    pub leading: BigRational,
    pub cusps: Vec<Cusp>,
    pub base_point: RationalPoint,
    pub primes: Vec<u64>,
    pub p: u32,
    pub prec: i64,
    /// Mordell–Weil rank r of the Jacobian.
    pub rank: usize,
}

/// A Q_p-linear combination Σ a_j ω_j of the basis.
#[derive(Clone, Debug)]
pub struct LogDifferential {
    pub coeffs: Vec<PadicNumber>,
}

impl LogDifferential {
    /// The basis element ω_j (0-based), at precision `prec`.
    pub fn basis(p: u32, size: usize, j: usize, prec: i64) -> Self {
        let coeffs = (0..size)
            .map(|i| if i == j { PadicNumber::one(p, prec) } else { PadicNumber::exact_zero(p) })
            .collect();
        LogDifferential { coeffs }
    }

    pub fn new(coeffs: Vec<PadicNumber>) -> Self {
        LogDifferential { coeffs }
    }

    /// True when only the first `genus` coefficients can be nonzero.
    pub fn is_holomorphic(&self, genus: usize) -> bool {
        self.coeffs.iter().skip(genus).all(|c| c.is_exact_zero())
    }
}

fn family_genus(family: &Family) -> Result<usize> {
    match family {
        Family::Hyperelliptic { f } => {
            let d = f.degree();
            if d < 3 {
                return Err(Error::UnsupportedFamily(format!("degree {d} does not give positive genus")));
            }
            Ok(((d - 1) / 2) as usize)
        }
        Family::Superelliptic { .. } => Ok(1),
    }
}

fn integer_sqrt(q: &BigRational) -> Option<BigInt> {
    if !q.is_integer() || q.is_negative() {
        return None;
    }
    let n = q.to_integer();
    let r = num_integer::Roots::sqrt(&n);
    (&r * &r == n).then_some(r)
}

fn cusps_of(family: &Family) -> Result<Vec<Cusp>> {
    let rational = |name: &str| Cusp {
        name: name.into(),
        field: NumberField::rationals(),
        real_places: 1,
        complex_places: 0,
    };
    match family {
        Family::Hyperelliptic { f } => {
            if f.degree() % 2 == 1 {
                Ok(vec![rational("inf")])
            } else {
                Ok(vec![rational("inf+"), rational("inf-")])
            }
        }
        Family::Superelliptic { .. } => Ok(vec![
            rational("Q1"),
            Cusp {
                name: "Q2".into(),
                field: NumberField::new(QPoly::from_ints(&[1, 1, 1]))?,
                real_places: 0,
                complex_places: 1,
            },
        ]),
    }
}

/// Why p is unusable for the family and prime set, if it is.
pub fn prime_obstruction(family: &Family, primes: &[u64], p: u32) -> Option<String> {
    let pp = p as u64;
    if p < 3 || !is_prime(pp) {
        return Some(format!("{p} is not an odd prime"));
    }
    if primes.contains(&pp) {
        return Some(format!("{p} lies in S"));
    }
    match family {
        Family::Hyperelliptic { f } => {
            let fbar = match f.reduce_mod(p) {
                Some(v) => v,
                None => return Some(format!("f is not {p}-integral")),
            };
            if fbar.len() as i64 - 1 != f.degree() {
                return Some(format!("{p} divides the leading coefficient"));
            }
            if fp::gcd(&fbar, &fp::derivative(&fbar, pp), pp).len() > 1 {
                return Some(format!("bad reduction at {p} (f mod {p} has a repeated root)"));
            }
            None
        }
        Family::Superelliptic { a } => {
            if pp % 3 != 1 {
                return Some(format!("{p} is not 1 mod 3, so the cube roots of unity are not in Q_{p}"));
            }
            let bad = BigInt::from(3) * a * (a * a - BigInt::from(4));
            if (bad % BigInt::from(pp)).is_zero() {
                return Some(format!("bad reduction at {p} ({p} divides 3a(a²−4))"));
            }
            None
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Primes below `bound` that pass every precondition.
pub fn admissible_primes(family: &Family, primes: &[u64], bound: u32) -> Vec<u32> {
    (3..bound).filter(|&p| prime_obstruction(family, primes, p).is_none()).collect()
}

impl CurveProblem {
    pub fn new(
        family: Family,
        base_point: RationalPoint,
        primes: Vec<u64>,
        p: u32,
        prec: i64,
        rank: usize,
    ) -> Result<Self> {
        let genus = family_genus(&family)?;
        let leading = match &family {
            Family::Hyperelliptic { f } => {
                if !f.is_integral() {
                    return Err(Error::Invalid("f must have integer coefficients".into()));
                }
                if !f.is_squarefree() {
                    return Err(Error::Invalid(format!("f = {f} is not squarefree")));
                }
                let d = f.leading();
                if f.degree() % 2 == 0 && integer_sqrt(&d).is_none() {
                    return Err(Error::UnsupportedFamily(format!(
                        "even degree needs a square leading coefficient, got {d}"
                    )));
                }
                d
            }
            Family::Superelliptic { a } => {
                if a.is_zero() || (a * a - BigInt::from(4)).is_zero() {
                    return Err(Error::Invalid(format!("a = {a} gives a singular curve")));
                }
                BigRational::one()
            }
        };
        if prec < 4 {
            return Err(Error::Invalid(format!("precision {prec} is too small")));
        }
        if let Some(why) = prime_obstruction(&family, &primes, p) {
            let ok = admissible_primes(&family, &primes, 60);
            return Err(Error::BadReduction(format!("p = {p} is not admissible: {why}; admissible primes below 60: {ok:?}")));
        }
        let cusps = cusps_of(&family)?;
        let c = CurveProblem { family, genus, leading, cusps, base_point, primes, p, prec, rank };
        if !c.contains(&c.base_point) {
            return Err(Error::Invalid(format!("base point {} is not on the curve", c.base_point)));
        }
        Ok(c)
    }

    /// The affine equation holds at the point.
    pub fn contains(&self, pt: &RationalPoint) -> bool {
        match &self.family {
            Family::Hyperelliptic { f } => &pt.y * &pt.y == f.eval(&pt.x),
            Family::Superelliptic { a } => {
                let a = BigRational::from_integer(a.clone());
                let x = &pt.x;
                &pt.y * &pt.y * &pt.y == x * x * x + a * x * x + x
            }
        }
    }

    /// The defining polynomial f with y^e = f(x).
    pub fn defining_poly(&self) -> QPoly {
        match &self.family {
            Family::Hyperelliptic { f } => f.clone(),
            Family::Superelliptic { a } => {
                QPoly::new(vec![rat(0), rat(1), BigRational::from_integer(a.clone()), rat(1)])
            }
        }
    }

    pub fn exponent(&self) -> u32 {
        match self.family {
            Family::Hyperelliptic { .. } => 2,
            Family::Superelliptic { .. } => 3,
        }
    }

    /// Geometric number of cusps n = Σ deg k(Q).
    pub fn n(&self) -> usize {
        self.cusps.iter().map(|c| c.degree()).sum()
    }

    pub fn n1(&self) -> usize {
        self.cusps.iter().map(|c| c.real_places).sum()
    }

    pub fn n2(&self) -> usize {
        self.cusps.iter().map(|c| c.complex_places).sum()
    }

    /// Size g + n − 1 of the differential basis.
    pub fn basis_size(&self) -> usize {
        self.genus + self.n() - 1
    }

    /// √d for the even hyperelliptic model.
    pub fn sqrt_leading(&self) -> Option<BigInt> {
        integer_sqrt(&self.leading)
    }
}

/// Exponents (i, k) with ω_j = x^i dx / y^k.
pub fn differential_basis(c: &CurveProblem) -> Result<Vec<(usize, u32)>> {
    match &c.family {
        Family::Hyperelliptic { .. } => Ok((0..c.basis_size()).map(|i| (i, 1)).collect()),
        Family::Superelliptic { .. } => Ok(vec![(0, 2), (1, 2), (0, 1)]),
    }
}

/// Res_Q(ω_j) as an element of k(Q), with j 0-based.
pub fn residue_at_cusp(c: &CurveProblem, j: usize, cusp: usize) -> Result<QPoly> {
    if j >= c.basis_size() || cusp >= c.cusps.len() {
        return Err(Error::Invalid(format!("no basis element {j} or cusp {cusp}")));
    }
    if j < c.genus {
        return Ok(QPoly::zero());
    }
    match &c.family {
        Family::Hyperelliptic { .. } => {
            // near ∞±, t = 1/x and y ~ ±√d·x^(g+1), so x^g dx/y ~ ∓(1/√d) dt/t
            let s = BigRational::from_integer(c.sqrt_leading().expect("validated"));
            let r = BigRational::one() / s;
            Ok(QPoly::constant(if cusp == 0 { -r } else { r }))
        }
        Family::Superelliptic { .. } => {
            // y ~ ζx at a cusp with y/x → ζ; x dx/y² ~ −ζ dt/t, dx/y ~ −ζ⁻¹ dt/t
            Ok(match (j, cusp) {
                (_, 0) => QPoly::from_ints(&[-1]),
                (1, _) => QPoly::from_ints(&[0, -1]),
                _ => QPoly::from_ints(&[1, 1]),
            })
        }
    }
}

/// Σ a_j φ(Res_Q ω_j) under one embedding of k(Q).
pub fn embedded_residue(c: &CurveProblem, omega: &LogDifferential, cusp: usize, phi: &FieldEmbedding) -> Result<PadicNumber> {
    let mut acc = PadicNumber::exact_zero(c.p);
    for (j, a) in omega.coeffs.iter().enumerate() {
        if a.is_exact_zero() {
            continue;
        }
        let r = residue_at_cusp(c, j, cusp)?;
        if r.is_zero() {
            continue;
        }
        acc = &acc + &(a * &phi.apply(&r));
    }
    Ok(acc)
}

/// Σ over cusps and embeddings of the residues; zero by the residue formula.
pub fn residue_sum(c: &CurveProblem, omega: &LogDifferential) -> Result<PadicNumber> {
    let mut acc = PadicNumber::exact_zero(c.p);
    for (q, cusp) in c.cusps.iter().enumerate() {
        for phi in crate::padic::hensel_embed(cusp.field.minpoly(), c.p, c.prec)? {
            acc = &acc + &embedded_residue(c, omega, q, &phi)?;
        }
    }
    Ok(acc)
}
