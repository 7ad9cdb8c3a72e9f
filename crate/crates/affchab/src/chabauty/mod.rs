//! The method proper: the Chabauty inequality, the pairing H, the matrix
//! M(U) and its kernel, the constants c, per-disc loci and the determinant
//! criterion.

mod locus;
mod matrix;

use std::collections::HashMap;

pub use locus::{all_disc_loci, classify, disc_locus, rho_series, Candidate, CandidateKind, DiscLocus, DiscStatus, LocusPoint};
pub use matrix::{
    annihilator, assemble_m, check_chabauty_condition, constant_c, correction_term, cusp_embeddings, generator_integrals,
    pairing_h, psi_vector, ArithmeticData, ChabautyCondition, ChabautyMatrix, MordellWeilGenerator,
};

use crate::arithmodel::{selmer_target, MarkedPoint, ReductionType, SelmerTarget};
use crate::coleman::CurveIntegrator;
use crate::curvegeom::{CurveProblem, LogDifferential, RationalPoint};
use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::qlinalg::PadicMatrix;

/// Everything computed for one reduction type.
#[derive(Clone, Debug)]
pub struct ChabautyOutput {
    pub sigma: ReductionType,
    pub condition: ChabautyCondition,
    pub target: SelmerTarget,
    pub matrix: ChabautyMatrix,
    /// Normalized kernel basis; each vector is the coefficient list of an
    /// annihilating differential.
    pub kernel: Vec<Vec<PadicNumber>>,
    pub kernel_loss: i64,
    /// c(P₀, Σ, ω) for each kernel vector.
    pub constants: Vec<PadicNumber>,
    pub loci: Vec<DiscLocus>,
    pub candidates: Vec<Candidate>,
}

impl ChabautyOutput {
    pub fn differentials(&self) -> Vec<LogDifferential> {
        self.kernel.iter().map(|v| LogDifferential::new(v.clone())).collect()
    }

    pub fn unresolved(&self) -> usize {
        self.loci.iter().filter(|l| matches!(l.status, DiscStatus::Unresolved(_))).count()
    }
}

/// Matrix, kernel and constants for one type, without the loci.
pub fn annihilate(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    sigma: &ReductionType,
) -> Result<(ChabautyCondition, SelmerTarget, ChabautyMatrix, Vec<Vec<PadicNumber>>, i64, Vec<PadicNumber>)> {
    let condition = check_chabauty_condition(problem, sigma);
    if !condition.passes {
        return Err(Error::Invalid(format!(
            "the Chabauty condition fails for {sigma}: {} is not below {}",
            condition.lhs, condition.rhs
        )));
    }
    let target = selmer_target(problem, &data.model, &data.base, sigma)?;
    let matrix = assemble_m(ci, problem, data, &target)?;
    let (kernel, loss) = annihilator(&matrix)?;
    let constants = kernel
        .iter()
        .map(|a| constant_c(problem, data, &target, &LogDifferential::new(a.clone()), ci.precision()))
        .collect::<Result<Vec<_>>>()?;
    Ok((condition, target, matrix, kernel, loss, constants))
}

/// The full pipeline for one type.
pub fn solve_sigma(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    sigma: &ReductionType,
    known: &[RationalPoint],
) -> Result<ChabautyOutput> {
    let mut cache = HashMap::new();
    solve_cached(ci, problem, data, sigma, known, &mut cache)
}

type LocusCache = HashMap<String, Vec<DiscLocus>>;

fn cache_key(kernel: &[Vec<PadicNumber>], constants: &[PadicNumber]) -> String {
    let mut s = String::new();
    for v in kernel.iter().chain(std::iter::once(&constants.to_vec())) {
        for x in v {
            s.push_str(&format!("{x:?};"));
        }
        s.push('|');
    }
    s
}

fn solve_cached(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    sigma: &ReductionType,
    known: &[RationalPoint],
    cache: &mut LocusCache,
) -> Result<ChabautyOutput> {
    let (condition, target, matrix, kernel, kernel_loss, constants) = annihilate(ci, problem, data, sigma)?;
    let key = cache_key(&kernel, &constants);
    let loci = match cache.get(&key) {
        Some(l) => l.clone(),
        None => {
            let base = ci.point(&data.base.point)?;
            let l = all_disc_loci(ci, &kernel, &constants, &base);
            cache.insert(key, l.clone());
            l
        }
    };
    let candidates = classify(ci, &loci, known)?;
    Ok(ChabautyOutput { sigma: sigma.clone(), condition, target, matrix, kernel, kernel_loss, constants, loci, candidates })
}

/// The pipeline for every type in order; types sharing a kernel and
/// constants share their loci.
pub fn solve_all(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    types: &[ReductionType],
    known: &[RationalPoint],
) -> Vec<Result<ChabautyOutput>> {
    let mut cache = LocusCache::new();
    types.iter().map(|t| solve_cached(ci, problem, data, t, known, &mut cache)).collect()
}

/// det(∫_{P₀}^{P_i} ω_j − c(P₀, Σ_i, ω_j)) for g + n − 1 points whose types
/// share a cuspidal part.
pub fn determinant_criterion(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    points: &[(MarkedPoint, ReductionType)],
) -> Result<PadicNumber> {
    let rows = criterion_rows(ci, problem, data, points)?;
    PadicMatrix::from_rows(problem.p, rows)?.det()
}

/// The rows of the determinant criterion, one per point.
pub fn criterion_rows(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    points: &[(MarkedPoint, ReductionType)],
) -> Result<Vec<Vec<PadicNumber>>> {
    let size = problem.basis_size();
    if points.len() != size {
        return Err(Error::DimensionMismatch(format!("{size} points are needed, {} given", points.len())));
    }
    let csp = points[0].1.cuspidal_part();
    if points.iter().any(|(_, t)| t.cuspidal_part() != csp) {
        return Err(Error::Invalid("the points do not share a cuspidal part".into()));
    }
    points.iter().map(|(pt, sigma)| criterion_row(ci, problem, data, pt, sigma)).collect()
}

/// ∫_{P₀}^P ω_j − c(P₀, Σ, ω_j) for every basis element.
pub fn criterion_row(
    ci: &CurveIntegrator,
    problem: &CurveProblem,
    data: &ArithmeticData,
    pt: &MarkedPoint,
    sigma: &ReductionType,
) -> Result<Vec<PadicNumber>> {
    let size = problem.basis_size();
    let base = ci.point(&data.base.point)?;
    let target = selmer_target(problem, &data.model, &data.base, sigma)?;
    let (ints, _) = ci.basis_integrals(&base, &ci.point(&pt.point)?)?;
    let mut row = Vec::with_capacity(size);
    for (j, v) in ints.iter().enumerate() {
        let w = LogDifferential::basis(problem.p, size, j, ci.precision());
        row.push(v - &constant_c(problem, data, &target, &w, ci.precision())?);
    }
    Ok(row)
}
