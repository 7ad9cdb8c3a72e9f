use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curvegeom::CurveProblem;
use crate::error::{Error, Result};
use crate::padic::{newton_lift, rational_valuation, PadicNumber, PadicPoly, RationalPower};
use crate::qlinalg::{fp, parse_rational, NumberField, QPoly, RationalMatrix};

fn yes() -> bool {
    true
}

fn one_str() -> String {
    "1".into()
}

fn base_id() -> String {
    "P0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub id: String,
    pub multiplicity: i64,
    /// The component minus D has an F_q-point.
    #[serde(default = "yes")]
    pub has_points: bool,
}

/// The special fibre over one bad prime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibreSpec {
    pub prime: u64,
    pub components: Vec<ComponentSpec>,
    pub intersection_matrix: Vec<Vec<i64>>,
    /// Object id to its q-intersection numbers with each component.
    #[serde(default)]
    pub incidences: BTreeMap<String, Vec<i64>>,
    /// The model is smooth where horizontal objects meet the cusp closures
    /// over this prime, so contact orders may be read off coordinates.
    #[serde(default)]
    pub smooth_at_cusps: bool,
}

/// a^q with a given by its coefficients in the field generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub base: Vec<String>,
    #[serde(default = "one_str")]
    pub exponent: String,
}

impl GeneratorSpec {
    pub fn parse(&self) -> Result<RationalPower> {
        Ok(RationalPower::new(QPoly::from_strs(&self.base)?, parse_rational(&self.exponent)?))
    }

    pub fn from_power(x: &RationalPower) -> Self {
        GeneratorSpec {
            base: x.base.coeffs().iter().map(|c| c.to_string()).collect(),
            exponent: x.exponent.to_string(),
        }
    }
}

/// A prime λ of the ring of integers of k(Q) above q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspPrimeSpec {
    pub cusp: String,
    pub lambda_id: String,
    pub over_prime: u64,
    pub e: u32,
    pub f: u32,
    pub generator: GeneratorSpec,
    /// Fibre component met by the cusp closure at λ.
    #[serde(default)]
    pub component: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoSpec {
    pub cusp: String,
    pub prime: u64,
    pub value: GeneratorSpec,
}

/// A pinned value of i_λ(object, Q̃).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverrideSpec {
    pub object: String,
    pub lambda_id: String,
    pub value: String,
}

/// The model-data block of a problem file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegularModelData {
    #[serde(default)]
    pub fibres: Vec<FibreSpec>,
    /// Primes of S over which the model is D-transversal.
    #[serde(default)]
    pub transversal: Vec<u64>,
    #[serde(default)]
    pub cusp_primes: Vec<CuspPrimeSpec>,
    /// ρ_q per cusp and prime; q itself when absent.
    #[serde(default)]
    pub rho: Vec<RhoSpec>,
    #[serde(default)]
    pub overrides: Vec<OverrideSpec>,
    /// Object id of the base point in the incidence tables.
    #[serde(default = "base_id")]
    pub base_object: String,
}

/// A validated fibre.
#[derive(Clone, Debug)]
pub struct Fibre {
    pub prime: u64,
    pub ids: Vec<String>,
    pub multiplicities: Vec<BigRational>,
    pub has_points: Vec<bool>,
    pub matrix: RationalMatrix,
    pub pinv: RationalMatrix,
    pub incidences: BTreeMap<String, Vec<BigRational>>,
    pub smooth_at_cusps: bool,
}

impl Fibre {
    /// The fibre of a prime of good reduction.
    pub fn smooth(prime: u64) -> Self {
        let m = RationalMatrix::zeros(1, 1);
        Fibre {
            prime,
            ids: vec![SMOOTH.into()],
            multiplicities: vec![BigRational::one()],
            has_points: vec![true],
            matrix: m.clone(),
            pinv: m,
            incidences: BTreeMap::new(),
            smooth_at_cusps: true,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| Error::MissingIncidence(format!("no component {id} over {}", self.prime)))
    }

    /// Unit vector of a component.
    pub fn unit(&self, k: usize) -> Vec<BigRational> {
        (0..self.len()).map(|i| if i == k { BigRational::one() } else { BigRational::zero() }).collect()
    }

    pub fn incidence(&self, object: &str) -> Result<&[BigRational]> {
        self.incidences
            .get(object)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::MissingIncidence(format!("object {object} over {}", self.prime)))
    }

    /// The component a section meets, read from its incidence vector.
    pub fn component_of(&self, object: &str) -> Result<usize> {
        if self.len() == 1 {
            return Ok(0);
        }
        let v = self.incidence(object)?;
        let hits: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        match hits.as_slice() {
            [k] => Ok(*k),
            _ => Err(Error::Invalid(format!("{object} does not meet a single component over {}", self.prime))),
        }
    }
}

/// Component id used for fibres that are not listed.
pub const SMOOTH: &str = "smooth";

/// A validated prime of a cusp field.
#[derive(Clone, Debug)]
pub struct CuspPrime {
    pub cusp: usize,
    pub lambda_id: String,
    pub over_prime: u64,
    pub e: u32,
    pub f: u32,
    pub generator: RationalPower,
    pub component: Option<String>,
}

/// Validated regular-model data for one curve problem.
#[derive(Clone, Debug)]
pub struct RegularModel {
    pub fibres: BTreeMap<u64, Fibre>,
    pub transversal: Vec<u64>,
    pub primes: Vec<CuspPrime>,
    pub rho: BTreeMap<(usize, u64), RationalPower>,
    pub overrides: BTreeMap<(String, String), BigRational>,
    pub base_object: String,
    fields: Vec<NumberField>,
}

fn ivec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

impl RegularModel {
    pub fn new(data: &RegularModelData, problem: &CurveProblem) -> Result<Self> {
        let mut fibres = BTreeMap::new();
        for f in &data.fibres {
            let fib = validate_fibre(f)?;
            if fibres.insert(f.prime, fib).is_some() {
                return Err(Error::Invalid(format!("two fibres over {}", f.prime)));
            }
        }
        let cusp_index = |name: &str| -> Result<usize> {
            problem
                .cusps
                .iter()
                .position(|c| c.name == name)
                .ok_or_else(|| Error::Invalid(format!("unknown cusp {name}")))
        };
        let mut primes = Vec::new();
        for r in &data.cusp_primes {
            if r.e == 0 || r.f == 0 {
                return Err(Error::Invalid(format!("{}: e and f must be positive", r.lambda_id)));
            }
            if u32::try_from(r.over_prime).is_err() {
                return Err(Error::Invalid(format!("{}: prime too large", r.lambda_id)));
            }
            if primes.iter().any(|x: &CuspPrime| x.lambda_id == r.lambda_id) {
                return Err(Error::Invalid(format!("duplicate prime id {}", r.lambda_id)));
            }
            if let (Some(c), Some(fib)) = (&r.component, fibres.get(&r.over_prime)) {
                fib.index_of(c)?;
            }
            primes.push(CuspPrime {
                cusp: cusp_index(&r.cusp)?,
                lambda_id: r.lambda_id.clone(),
                over_prime: r.over_prime,
                e: r.e,
                f: r.f,
                generator: r.generator.parse()?,
                component: r.component.clone(),
            });
        }
        let mut rho = BTreeMap::new();
        for r in &data.rho {
            rho.insert((cusp_index(&r.cusp)?, r.prime), r.value.parse()?);
        }
        let mut overrides = BTreeMap::new();
        for o in &data.overrides {
            if !primes.iter().any(|x| x.lambda_id == o.lambda_id) {
                return Err(Error::Invalid(format!("override refers to unknown prime {}", o.lambda_id)));
            }
            let v = parse_rational(&o.value)?;
            if v.is_negative() {
                return Err(Error::Invalid(format!("negative intersection number for {}", o.object)));
            }
            overrides.insert((o.object.clone(), o.lambda_id.clone()), v);
        }
        let model = RegularModel {
            fibres,
            transversal: data.transversal.clone(),
            primes,
            rho,
            overrides,
            base_object: data.base_object.clone(),
            fields: problem.cusps.iter().map(|c| c.field.clone()).collect(),
        };
        model.check_prime_tables()?;
        Ok(model)
    }

    pub fn field(&self, cusp: usize) -> &NumberField {
        &self.fields[cusp]
    }

    pub fn cusp_count(&self) -> usize {
        self.fields.len()
    }

    /// The fibre over q, smooth and irreducible when not listed.
    pub fn fibre(&self, q: u64) -> Fibre {
        self.fibres.get(&q).cloned().unwrap_or_else(|| Fibre::smooth(q))
    }

    pub fn prime(&self, lambda_id: &str) -> Result<&CuspPrime> {
        self.primes
            .iter()
            .find(|x| x.lambda_id == lambda_id)
            .ok_or_else(|| Error::MissingIncidence(format!("unknown prime {lambda_id}")))
    }

    /// The primes λ of k(Q) over q listed for a cusp.
    pub fn primes_over(&self, cusp: usize, q: u64) -> Vec<&CuspPrime> {
        self.primes.iter().filter(|x| x.cusp == cusp && x.over_prime == q).collect()
    }

    /// Fails unless every prime of every cusp field above q is listed.
    pub fn require_primes_over(&self, q: u64) -> Result<()> {
        for c in 0..self.cusp_count() {
            if self.primes_over(c, q).is_empty() {
                return Err(Error::MissingIncidence(format!("no prime of cusp {c} over {q} is listed")));
            }
        }
        Ok(())
    }

    pub fn rho(&self, cusp: usize, q: u64) -> RationalPower {
        self.rho
            .get(&(cusp, q))
            .cloned()
            .unwrap_or_else(|| RationalPower::plain(QPoly::constant(BigRational::from_integer(q.into()))))
    }

    /// The component of the fibre over λ's prime met by the cusp closure.
    pub fn cusp_component(&self, lambda: &CuspPrime) -> Result<usize> {
        let fib = self.fibre(lambda.over_prime);
        match &lambda.component {
            Some(c) => fib.index_of(c),
            None if fib.len() == 1 => Ok(0),
            None => Err(Error::MissingIncidence(format!(
                "{}: component met by the cusp closure is not given",
                lambda.lambda_id
            ))),
        }
    }

    /// i_λ(C, Q̃) for the component C of index k.
    pub fn component_intersection(&self, lambda: &CuspPrime, k: usize) -> Result<BigRational> {
        if self.cusp_component(lambda)? != k {
            return Ok(BigRational::zero());
        }
        let fib = self.fibre(lambda.over_prime);
        Ok(BigRational::from_integer(lambda.e.into()) / &fib.multiplicities[k])
    }

    /// v_λ(α) for a nonzero α ∈ k(Q).
    pub fn valuation(&self, lambda: &CuspPrime, alpha: &QPoly) -> Result<i64> {
        let field = self.field(lambda.cusp);
        let a = field.element(alpha);
        if a.is_zero() {
            return Err(Error::ZeroInput(format!("valuation of 0 at {}", lambda.lambda_id)));
        }
        let ell = lambda.over_prime as u32;
        if field.degree() == 1 {
            return Ok(rational_valuation(&a.coeff(0), ell));
        }
        let over = self.primes_over(lambda.cusp, lambda.over_prime);
        let ef: u32 = over.iter().map(|x| x.e * x.f).sum();
        if over.len() == 1 && ef as usize == field.degree() {
            let v = rational_valuation(&field.norm(&a), ell);
            return Ok(v / lambda.f as i64);
        }
        if lambda.e == 1 && lambda.f == 1 {
            return split_valuation(field, lambda, &a);
        }
        Err(Error::NeedsOverride(format!("valuation at {} is not determined by the listed data", lambda.lambda_id)))
    }

    /// v_λ(a^q) = q·v_λ(a).
    pub fn power_valuation(&self, lambda: &CuspPrime, x: &RationalPower) -> Result<BigRational> {
        if x.exponent.is_zero() {
            return Ok(BigRational::zero());
        }
        Ok(BigRational::from_integer(self.valuation(lambda, &x.base)?.into()) * &x.exponent)
    }

    /// Generator normalization and Π_{λ|q} π_λ^{e(λ|q)} = ρ_q in k(Q)^× ⊗ Q.
    fn check_prime_tables(&self) -> Result<()> {
        let mut groups: BTreeMap<(usize, u64), Vec<&CuspPrime>> = BTreeMap::new();
        for x in &self.primes {
            groups.entry((x.cusp, x.over_prime)).or_default().push(x);
        }
        for ((cusp, q), group) in groups {
            let field = self.field(cusp);
            let ef: u32 = group.iter().map(|x| x.e * x.f).sum();
            if ef as usize != field.degree() {
                return Err(Error::Invalid(format!(
                    "primes of cusp {cusp} over {q} have Σ e·f = {ef}, field degree is {}",
                    field.degree()
                )));
            }
            for l in &group {
                for m in &group {
                    let v = self.power_valuation(l, &m.generator)?;
                    let want = if l.lambda_id == m.lambda_id { BigRational::one() } else { BigRational::zero() };
                    if v != want {
                        return Err(Error::Invalid(format!(
                            "generator of {} has valuation {v} at {}",
                            m.lambda_id, l.lambda_id
                        )));
                    }
                }
            }
            let mut factors: Vec<RationalPower> =
                group.iter().map(|x| x.generator.pow(&BigRational::from_integer(x.e.into()))).collect();
            factors.push(self.rho(cusp, q).pow(&-BigRational::one()));
            if !is_torsion(field, &factors)? {
                return Err(Error::Invalid(format!(
                    "prime generators of cusp {cusp} over {q} do not multiply to ρ_q"
                )));
            }
        }
        Ok(())
    }
}

fn validate_fibre(f: &FibreSpec) -> Result<Fibre> {
    let n = f.components.len();
    if n == 0 {
        return Err(Error::Invalid(format!("fibre over {} has no components", f.prime)));
    }
    if f.intersection_matrix.len() != n || f.intersection_matrix.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("intersection matrix over {} is not {n}×{n}", f.prime)));
    }
    if f.components.iter().any(|c| c.multiplicity < 1) {
        return Err(Error::Invalid(format!("nonpositive multiplicity over {}", f.prime)));
    }
    let matrix = RationalMatrix::from_ints(&f.intersection_matrix)?;
    if !matrix.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mult: Vec<BigRational> = f.components.iter().map(|c| BigRational::from_integer(c.multiplicity.into())).collect();
    if matrix.mul_vec(&mult)?.iter().any(|x| !x.is_zero()) {
        return Err(Error::Invalid(format!("fibre over {} does not have self-intersection 0", f.prime)));
    }
    let mut incidences = BTreeMap::new();
    for (k, v) in &f.incidences {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("incidence of {k} over {} has {} entries", f.prime, v.len())));
        }
        incidences.insert(k.clone(), ivec(v));
    }
    let pinv = matrix.moore_penrose()?;
    Ok(Fibre {
        prime: f.prime,
        ids: f.components.iter().map(|c| c.id.clone()).collect(),
        multiplicities: mult,
        has_points: f.components.iter().map(|c| c.has_points).collect(),
        matrix,
        pinv,
        incidences,
        smooth_at_cusps: f.smooth_at_cusps,
    })
}

/// v_λ(a) for a degree-one unramified λ, through the embedding into Q_ℓ
/// that sends π_λ into the maximal ideal.
fn split_valuation(field: &NumberField, lambda: &CuspPrime, a: &QPoly) -> Result<i64> {
    let ell = lambda.over_prime as u32;
    let m = field.minpoly();
    // clear denominators: a = b/D with b integral
    let d = a.denominator();
    let b = a.scale(&BigRational::from_integer(d.clone()));
    let depth = rational_valuation(&field.norm(&b), ell).max(0) + 2;
    let base_depth = rational_valuation(&field.norm(&lambda.generator.base), ell).abs() + 2;
    let prec = depth.max(base_depth);
    let reduced = m.reduce_mod(ell).ok_or_else(|| Error::Invalid(format!("minimal polynomial is not {ell}-integral")))?;
    let dm = fp::derivative(&reduced, ell as u64);
    let f = PadicPoly::from_qpoly(m, ell, prec);
    let df = f.derivative();
    let sign = lambda.generator.exponent.is_positive();
    for r in fp::roots(&reduced, ell as u64) {
        if fp::eval(&dm, r, ell as u64) == 0 {
            continue;
        }
        let root = newton_lift(&f, &df, PadicNumber::from_int(ell, r as i64, prec), prec)?;
        let g = lambda.generator.base.eval_padic(&root, prec);
        let hits = if sign { g.valuation_bound() > 0 } else { g.is_unit() };
        if !hits {
            continue;
        }
        let v = b.eval_padic(&root, prec);
        if v.is_zero() {
            return Err(Error::PrecisionLoss(format!("valuation at {} exceeds {prec}", lambda.lambda_id)));
        }
        let e = lambda.e as i64;
        return Ok(v.valuation() - e * crate::padic::int_valuation(&d, ell));
    }
    Err(Error::Invalid(format!("generator of {} does not single out a prime", lambda.lambda_id)))
}

/// Whether Π x_i (rational powers) is torsion in k^×.
pub(crate) fn is_torsion(field: &NumberField, factors: &[RationalPower]) -> Result<bool> {
    let l = factors.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.exponent.denom()));
    let mut y = QPoly::constant(BigRational::one());
    for x in factors {
        let e = (&x.exponent * BigRational::from_integer(l.clone())).to_integer();
        let k = e.abs().to_u32().ok_or_else(|| Error::Invalid("exponent too large".into()))?;
        let mut b = field.element(&x.base);
        if e.is_negative() {
            b = field.inv(&b)?;
        }
        y = field.mul(&y, &field.pow(&b, k));
    }
    // roots of unity in a degree-n field have order m with φ(m) ≤ n
    let n = field.degree() as u64;
    let one = QPoly::constant(BigRational::one());
    let mut z = one.clone();
    for m in 1..=(2 * n * n + 2) {
        z = field.mul(&z, &y);
        if totient(m) <= n && z == one {
            return Ok(true);
        }
    }
    Ok(false)
}

fn totient(mut m: u64) -> u64 {
    let mut out = m;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            out -= out / d;
        }
        d += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients() {
        assert_eq!([1, 2, 3, 4, 6, 12].map(totient), [1, 1, 2, 2, 2, 4]);
    }

    #[test]
    fn sixth_roots_of_unity_are_torsion() {
        let k = NumberField::new(QPoly::from_ints(&[1, 1, 1])).unwrap();
        let minus_zeta = RationalPower::plain(QPoly::from_ints(&[0, -1]));
        assert!(is_torsion(&k, &[minus_zeta]).unwrap());
        let two = RationalPower::plain(QPoly::from_ints(&[2]));
        assert!(!is_torsion(&k, &[two]).unwrap());
    }
}
