use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::arithmodel::{psi_intersection, require_contact_primes, MarkedPoint, RegularModel, ReductionType, SelmerTarget};
use crate::coleman::{CurveIntegrator, Method};
use crate::curvegeom::{embedded_residue, CurveProblem, LogDifferential};
use crate::error::{Error, Result};
use crate::padic::{hensel_embed, log_rational_power, FieldEmbedding, PadicNumber, RationalPower};
use crate::qlinalg::{normalize, PadicMatrix};

/// A Mordell–Weil generator G = Σ n_i·P_i, optionally with pinned integrals.
#[derive(Clone, Debug)]
pub struct MordellWeilGenerator {
    pub id: String,
    pub support: Vec<(i64, MarkedPoint)>,
    /// ∫_G ω_j for every basis element, from an external source.
    pub imported: Option<Vec<PadicNumber>>,
}

/// Everything beyond the curve that the method consumes.
#[derive(Clone, Debug)]
pub struct ArithmeticData {
    pub base: MarkedPoint,
    pub s: Vec<u64>,
    pub mordell_weil: Vec<MordellWeilGenerator>,
    /// Unit generators e_i = (e_{i,Q})_Q, one value per cusp.
    pub units: Vec<Vec<RationalPower>>,
    pub model: RegularModel,
}

/// The block matrix [[A, B], [0, C], [0, D(U)]].
#[derive(Clone, Debug)]
pub struct ChabautyMatrix {
    pub matrix: PadicMatrix,
    pub genus: usize,
    /// r, k = rows of C, s = rows of D(U).
    pub r: usize,
    pub k: usize,
    pub s: usize,
    pub prec: i64,
    /// ∫_{G_i} ω_j for every generator, and how each row was obtained.
    pub integrals: Vec<Vec<PadicNumber>>,
    pub methods: Vec<Method>,
}

impl ChabautyMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.matrix.nrows(), self.matrix.ncols())
    }

    pub fn entry(&self, i: usize, j: usize) -> &PadicNumber {
        self.matrix.get(i, j)
    }
}

/// Outcome of the affine Chabauty inequality for one type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChabautyCondition {
    pub passes: bool,
    pub lhs: i64,
    pub rhs: i64,
    /// rhs − lhs; the inequality is strict, so it holds iff slack ≥ 1.
    pub slack: i64,
}

/// r + #C(Σ) + ([K:Q]−1)n < g + rank 𝒪_K^× + #|D| + n₂(D) − 1, with K = Q.
pub fn check_chabauty_condition(problem: &CurveProblem, sigma: &ReductionType) -> ChabautyCondition {
    let lhs = (problem.rank + sigma.support().len()) as i64;
    let rhs = (problem.genus + problem.cusps.len() + problem.n2()) as i64 - 1;
    ChabautyCondition { passes: lhs < rhs, lhs, rhs, slack: rhs - lhs }
}

/// The embeddings of every cusp field into Q_p.
pub fn cusp_embeddings(problem: &CurveProblem, prec: i64) -> Result<Vec<Vec<FieldEmbedding>>> {
    problem.cusps.iter().map(|c| hensel_embed(c.field.minpoly(), problem.p, prec)).collect()
}

/// Σ_{Q,φ} φ(Res_Q ω) Σ_{λ of Q} x_λ·log φ(π_λ).
pub fn correction_term(
    problem: &CurveProblem,
    model: &RegularModel,
    coeffs: &BTreeMap<String, BigRational>,
    omega: &LogDifferential,
    prec: i64,
) -> Result<PadicNumber> {
    let embeddings = cusp_embeddings(problem, prec + 4)?;
    let mut acc = PadicNumber::exact_zero(problem.p);
    for (id, x) in coeffs {
        if x.is_zero() {
            continue;
        }
        let lambda = model.prime(id)?;
        for phi in &embeddings[lambda.cusp] {
            let r = embedded_residue(problem, omega, lambda.cusp, phi)?;
            if r.is_exact_zero() {
                continue;
            }
            let l = log_rational_power(&lambda.generator, phi)?;
            acc = &acc + &(&r * &l).mul_rational(x);
        }
    }
    Ok(acc)
}

/// i_λ(Ψ_q(G), 𝒬̃) for every listed λ.
pub fn psi_vector(problem: &CurveProblem, data: &ArithmeticData, g: &[(i64, MarkedPoint)]) -> Result<BTreeMap<String, BigRational>> {
    let pts: Vec<&MarkedPoint> = g.iter().map(|(_, p)| p).collect();
    require_contact_primes(problem, &data.model, &pts)?;
    for (q, fibre) in &data.model.fibres {
        if fibre.len() > 1 {
            data.model.require_primes_over(*q)?;
        }
    }
    let mut out = BTreeMap::new();
    for lambda in &data.model.primes {
        out.insert(lambda.lambda_id.clone(), psi_intersection(problem, &data.model, g, lambda)?);
    }
    Ok(out)
}

/// ∫_G ω for every basis element, from the integrator or the imported table.
pub fn generator_integrals(ci: &CurveIntegrator, data: &ArithmeticData, g: &MordellWeilGenerator) -> Result<(Vec<PadicNumber>, Method)> {
    if let Some(v) = &g.imported {
        if v.len() != ci.basis_size() {
            return Err(Error::DimensionMismatch(format!("{} has {} imported integrals", g.id, v.len())));
        }
        return Ok((v.clone(), Method::Imported));
    }
    let base = ci.point(&data.base.point)?;
    let p = ci.prime();
    let mut acc = vec![PadicNumber::exact_zero(p); ci.basis_size()];
    let mut method = Method::Tiny;
    for (n, mp) in &g.support {
        let (v, m) = ci.basis_integrals(&base, &ci.point(&mp.point)?)?;
        if m != Method::Tiny {
            method = m;
        }
        for (a, x) in acc.iter_mut().zip(&v) {
            *a = &*a + &x.mul_i64(*n);
        }
    }
    Ok((acc, method))
}

fn combine(omega: &LogDifferential, v: &[PadicNumber], p: u32) -> PadicNumber {
    let mut acc = PadicNumber::exact_zero(p);
    for (a, x) in omega.coeffs.iter().zip(v) {
        if !a.is_exact_zero() {
            acc = &acc + &(a * x);
        }
    }
    acc
}

/// H(G, ω) = ∫_G ω − Σ_{Q,φ} φ(Res_Q ω) Σ_λ i_λ(Ψ_q(G), 𝒬̃)·log φ(π_λ),
/// with ∫_G ω_j supplied.
pub fn pairing_h(
    problem: &CurveProblem,
    data: &ArithmeticData,
    g: &[(i64, MarkedPoint)],
    integrals: &[PadicNumber],
    omega: &LogDifferential,
    prec: i64,
) -> Result<PadicNumber> {
    let psi = psi_vector(problem, data, g)?;
    let corr = correction_term(problem, &data.model, &psi, omega, prec)?;
    Ok(&combine(omega, integrals, problem.p) - &corr)
}

/// c(b, ω) = Σ_{Q,φ} φ(Res_Q ω) Σ_λ b_λ·log φ(π_λ).
pub fn constant_c(problem: &CurveProblem, data: &ArithmeticData, target: &SelmerTarget, omega: &LogDifferential, prec: i64) -> Result<PadicNumber> {
    correction_term(problem, &data.model, &target.b, omega, prec)
}

/// M(U) for the cuspidal part of σ, with U read from `target`.
pub fn assemble_m(ci: &CurveIntegrator, problem: &CurveProblem, data: &ArithmeticData, target: &SelmerTarget) -> Result<ChabautyMatrix> {
    let p = problem.p;
    let prec = ci.precision();
    let g = problem.genus;
    let size = problem.basis_size();
    let r = data.mordell_weil.len();
    if r != problem.rank {
        return Err(Error::DimensionMismatch(format!("rank is {} but {r} generators are given", problem.rank)));
    }
    let unit_rank: usize = problem.cusps.iter().map(|c| c.field.unit_rank()).sum();
    if data.units.len() != unit_rank {
        return Err(Error::DimensionMismatch(format!(
            "the cusp fields need {unit_rank} unit generators, {} are given",
            data.units.len()
        )));
    }
    let basis: Vec<LogDifferential> = (0..size).map(|j| LogDifferential::basis(p, size, j, prec)).collect();
    let mut rows = Vec::new();
    let mut methods = Vec::new();
    let mut integrals = Vec::new();
    let computed: Vec<Result<(Vec<PadicNumber>, Method)>> = std::thread::scope(|sc| {
        let handles: Vec<_> = data
            .mordell_weil
            .iter()
            .map(|gen| sc.spawn(move || generator_integrals(ci, data, gen)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("integration thread")).collect()
    });
    for (gen, res) in data.mordell_weil.iter().zip(computed) {
        let (ints, m) = res?;
        let psi = psi_vector(problem, data, &gen.support)?;
        let mut row = Vec::with_capacity(size);
        for (j, w) in basis.iter().enumerate() {
            if j < g {
                row.push(ints[j].clone());
            } else {
                let corr = correction_term(problem, &data.model, &psi, w, prec)?;
                row.push(&ints[j] - &corr);
            }
        }
        rows.push(row);
        methods.push(m);
        integrals.push(ints);
    }
    let embeddings = cusp_embeddings(problem, prec + 4)?;
    for unit in &data.units {
        if unit.len() != problem.cusps.len() {
            return Err(Error::DimensionMismatch("a unit generator needs one value per cusp".into()));
        }
        let mut row = vec![PadicNumber::exact_zero(p); size];
        for (j, w) in basis.iter().enumerate().skip(g) {
            let mut acc = PadicNumber::exact_zero(p);
            for (q, e) in unit.iter().enumerate() {
                for phi in &embeddings[q] {
                    let res = embedded_residue(problem, w, q, phi)?;
                    if !res.is_exact_zero() {
                        acc = &acc + &(&res * &log_rational_power(e, phi)?);
                    }
                }
            }
            row[j] = acc;
        }
        rows.push(row);
    }
    for u in &target.u {
        let mut row = vec![PadicNumber::exact_zero(p); size];
        for (j, w) in basis.iter().enumerate().skip(g) {
            row[j] = correction_term(problem, &data.model, u, w, prec)?;
        }
        rows.push(row);
    }
    let matrix = if rows.is_empty() { PadicMatrix::zeros(p, 0, size) } else { PadicMatrix::from_rows(p, rows)? };
    Ok(ChabautyMatrix { matrix, genus: g, r, k: data.units.len(), s: target.u.len(), prec, integrals, methods })
}

/// Normalized basis of ker M and the differentials ω = Σ a_j ω_j.
pub fn annihilator(m: &ChabautyMatrix) -> Result<(Vec<Vec<PadicNumber>>, i64)> {
    let size = m.matrix.ncols();
    let p = m.matrix.prime();
    if m.matrix.nrows() == 0 {
        let vecs = (0..size).map(|j| LogDifferential::basis(p, size, j, m.prec).coeffs).collect();
        return Ok((vecs, 0));
    }
    let k = m.matrix.kernel()?;
    if k.vectors.is_empty() {
        return Err(Error::PrecisionLoss("the matrix has trivial kernel at working precision".into()));
    }
    let vecs = k.vectors.into_iter().map(normalize).collect::<Result<Vec<_>>>()?;
    Ok((vecs, k.loss))
}
