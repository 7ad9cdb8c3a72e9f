//! Problem files, the `solve` and `verify` pipelines, and their JSON reports.

mod problem_file;
mod report;

pub use problem_file::{
    ArithmeticSpec, CurveSpec, DivisorSpec, GeneratorsSpec, ImportedIntegral, LoadedProblem, ProblemFile, SCHEMA_VERSION,
};
pub use report::{
    CandidateReport, DeterminantReport, DiscReport, ErrorRecord, PointCheck, Report, RootReport, TypeReport, VerifyReport,
};

use std::collections::BTreeMap;

use crate::arithmodel::{enumerate_reduction_types, reduction_type_of, MarkedPoint, ReductionType};
use crate::chabauty::{annihilate, criterion_row, solve_all, CandidateKind};
use crate::coleman::CurveIntegrator;
use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::qlinalg::PadicMatrix;

/// Digits of precision `verify` may lose before a vanishing check fails.
pub const VERIFY_LOSS: i64 = 6;

/// Exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Complete = 0,
    Error = 1,
    Partial = 2,
}

/// Runs the pipeline for every reduction type (or only the one at
/// `sigma`).
pub fn solve(file: &ProblemFile, p: Option<u32>, prec: Option<i64>, sigma: Option<usize>) -> (Report, Outcome) {
    let mut report = Report::empty(file, p, prec);
    let loaded = match file.load(p, prec) {
        Ok(l) => l,
        Err(e) => {
            report.error = Some(ErrorRecord::from(&e));
            return (report, Outcome::Error);
        }
    };
    match solve_loaded(&loaded, sigma, &mut report) {
        Ok(outcome) => (report, outcome),
        Err(e) => {
            report.error = Some(ErrorRecord::from(&e));
            (report, Outcome::Error)
        }
    }
}

fn solve_loaded(l: &LoadedProblem, sigma: Option<usize>, report: &mut Report) -> Result<Outcome> {
    let types = enumerate_reduction_types(&l.data.model, &l.data.s)?;
    let chosen: Vec<(usize, ReductionType)> = match sigma {
        Some(i) => vec![(i, types.get(i).cloned().ok_or_else(|| Error::Invalid(format!("no reduction type {i}; there are {}", types.len())))?)],
        None => types.into_iter().enumerate().collect(),
    };
    let ci = CurveIntegrator::new(&l.problem)?;
    let known: Vec<_> = l.known.iter().map(|k| k.point.clone()).collect();
    let sigmas: Vec<ReductionType> = chosen.iter().map(|(_, t)| t.clone()).collect();
    let results = solve_all(&ci, &l.problem, &l.data, &sigmas, &known);
    let mut outcome = Outcome::Complete;
    for ((index, t), res) in chosen.into_iter().zip(results) {
        let tr = match res {
            Ok(out) => {
                if out.unresolved() > 0 && outcome == Outcome::Complete {
                    outcome = Outcome::Partial;
                }
                if report.integrals.is_empty() {
                    report.integrals = l
                        .data
                        .mordell_weil
                        .iter()
                        .zip(&out.matrix.integrals)
                        .map(|(g, v)| ImportedIntegral { generator: g.id.clone(), values: v.iter().map(|x| x.to_string()).collect() })
                        .collect();
                }
                TypeReport::from_output(index, &out)
            }
            Err(e) => {
                outcome = Outcome::Error;
                TypeReport::failed(index, &t, &e)
            }
        };
        report.types.push(tr);
    }
    report.finish(outcome, &l.known);
    Ok(outcome)
}

/// Evaluates ∫_{P₀}^P ω − c at every known point and the determinant
/// criterion on every (g + n − 1)-subset sharing a cuspidal part.
pub fn verify(file: &ProblemFile, p: Option<u32>, prec: Option<i64>) -> (VerifyReport, Outcome) {
    let mut report = VerifyReport::default();
    match verify_inner(file, p, prec, &mut report) {
        Ok(()) => {
            let ok = report.points.iter().all(|c| c.pass) && report.determinants.iter().all(|d| d.pass);
            report.pass = ok;
            (report, if ok { Outcome::Complete } else { Outcome::Partial })
        }
        Err(e) => {
            report.error = Some(ErrorRecord::from(&e));
            (report, Outcome::Error)
        }
    }
}

fn verify_inner(file: &ProblemFile, p: Option<u32>, prec: Option<i64>, report: &mut VerifyReport) -> Result<()> {
    let l = file.load(p, prec)?;
    let size = l.problem.basis_size();
    if l.known.is_empty() {
        return Err(Error::Invalid("verify needs a known-points list".into()));
    }
    let ci = CurveIntegrator::new(&l.problem)?;
    let n = ci.precision();
    report.precision = n;
    report.threshold = n - VERIFY_LOSS;
    let mut kernels: BTreeMap<String, Vec<Vec<PadicNumber>>> = BTreeMap::new();
    let mut typed: Vec<(MarkedPoint, ReductionType, Vec<PadicNumber>)> = Vec::new();
    for pt in &l.known {
        let sigma = reduction_type_of(&l.problem, &l.data.model, &l.data.s, pt)?;
        let key = sigma.to_string();
        if !kernels.contains_key(&key) {
            let (_, _, _, kernel, _, _) = annihilate(&ci, &l.problem, &l.data, &sigma)?;
            kernels.insert(key.clone(), kernel);
        }
        let row = criterion_row(&ci, &l.problem, &l.data, pt, &sigma)?;
        // c is linear in ω, so ∫ω − c(ω) = Σ a_j (∫ω_j − c(ω_j))
        let mut values = Vec::new();
        for a in &kernels[&key] {
            let mut acc = PadicNumber::exact_zero(l.problem.p);
            for (x, r) in a.iter().zip(&row) {
                acc = &acc + &(x * r);
            }
            values.push(acc);
        }
        let valuation = values.iter().map(bounded_valuation).min().unwrap_or(n);
        report.points.push(PointCheck {
            id: pt.id.clone(),
            point: pt.point.to_string(),
            sigma: sigma.to_string(),
            values: values.iter().map(|v| v.to_string()).collect(),
            valuation,
            pass: valuation >= report.threshold,
        });
        typed.push((pt.clone(), sigma, row));
    }
    let mut groups: BTreeMap<Vec<(u64, String)>, Vec<usize>> = BTreeMap::new();
    for (i, (_, t, _)) in typed.iter().enumerate() {
        groups.entry(t.cuspidal_part()).or_default().push(i);
    }
    for members in groups.values() {
        for subset in subsets(members, size) {
            let rows: Vec<Vec<PadicNumber>> = subset.iter().map(|&i| typed[i].2.clone()).collect();
            let det = PadicMatrix::from_rows(l.problem.p, rows)?.det()?;
            let v = bounded_valuation(&det);
            report.determinants.push(DeterminantReport {
                points: subset.iter().map(|&i| typed[i].0.id.clone()).collect(),
                value: det.to_string(),
                valuation: v,
                pass: v >= report.threshold,
            });
        }
    }
    Ok(())
}

/// v(x), or its absolute precision when x is indistinguishable from zero.
pub fn bounded_valuation(x: &PadicNumber) -> i64 {
    if x.is_zero() {
        x.precision()
    } else {
        x.valuation()
    }
}

/// All k-element subsets, in lexicographic order.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut cur, &mut out);
    out
}

/// Counts of candidate classes over all reported types.
pub fn candidate_counts(report: &Report) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for t in &report.types {
        for c in &t.candidates {
            let k = match c.kind {
                CandidateKind::MatchedKnown => "matched-known",
                CandidateKind::ExtraPadic => "extra-padic",
                CandidateKind::UnresolvedDisc => "unresolved-disc",
            };
            *m.entry(k).or_insert(0) += 1;
        }
    }
    m
}
