use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use crate::arithmodel::{MarkedPoint, ReductionType};
use crate::chabauty::{CandidateKind, ChabautyCondition, ChabautyOutput, DiscStatus};
use crate::error::Error;

use super::problem_file::{ImportedIntegral, ProblemFile};
use super::Outcome;

/// Terms of each disc series shown in a report.
const SERIES_TERMS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord { kind: e.kind().to_string(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub t: String,
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscReport {
    pub disc: String,
    /// resolved, excluded or unresolved.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    pub roots: Vec<RootReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub kind: CandidateKind,
    pub disc: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known: Option<String>,
}

/// The outcome for one reduction type.
#[derive(Clone, Debug, Serialize)]
pub struct TypeReport {
    pub index: usize,
    pub label: String,
    pub sigma: ReductionType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<ChabautyCondition>,
    pub b: BTreeMap<String, String>,
    pub u: Vec<BTreeMap<String, String>>,
    pub matrix: Vec<Vec<String>>,
    pub methods: Vec<String>,
    pub kernel: Vec<Vec<String>>,
    pub kernel_loss: i64,
    pub constants: Vec<String>,
    pub discs: Vec<DiscReport>,
    pub candidates: Vec<CandidateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

fn rationals(m: &BTreeMap<String, BigRational>) -> BTreeMap<String, String> {
    m.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

impl TypeReport {
    pub fn from_output(index: usize, out: &ChabautyOutput) -> Self {
        let m = &out.matrix.matrix;
        let matrix = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect()).collect();
        let discs = out
            .loci
            .iter()
            .map(|l| {
                let disc = l.disc.label();
                match &l.status {
                    DiscStatus::Resolved { series, bound, points } => DiscReport {
                        disc,
                        status: "resolved".into(),
                        reason: None,
                        bound: Some(*bound),
                        series: Some(series.render(series.coefficient_precision(), SERIES_TERMS)),
                        roots: points
                            .iter()
                            .map(|lp| RootReport { t: lp.t.to_string(), x: lp.point.x.to_string(), y: lp.point.y.to_string() })
                            .collect(),
                    },
                    DiscStatus::Excluded(why) => DiscReport {
                        disc,
                        status: "excluded".into(),
                        reason: Some(why.clone()),
                        bound: None,
                        series: None,
                        roots: vec![],
                    },
                    DiscStatus::Unresolved(why) => DiscReport {
                        disc,
                        status: "unresolved".into(),
                        reason: Some(why.clone()),
                        bound: None,
                        series: None,
                        roots: vec![],
                    },
                }
            })
            .collect();
        let candidates = out
            .candidates
            .iter()
            .map(|c| CandidateReport {
                kind: c.kind,
                disc: c.disc.clone(),
                point: c.point.as_ref().map(|p| p.to_string()),
                known: c.known.as_ref().map(|k| k.to_string()),
            })
            .collect();
        TypeReport {
            index,
            label: out.sigma.to_string(),
            sigma: out.sigma.clone(),
            condition: Some(out.condition.clone()),
            b: rationals(&out.target.b),
            u: out.target.u.iter().map(rationals).collect(),
            matrix,
            methods: out.matrix.methods.iter().map(|m| m.to_string()).collect(),
            kernel: out.kernel.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
            kernel_loss: out.kernel_loss,
            constants: out.constants.iter().map(|x| x.to_string()).collect(),
            discs,
            candidates,
            error: None,
        }
    }

    pub fn failed(index: usize, sigma: &ReductionType, e: &Error) -> Self {
        TypeReport {
            index,
            label: sigma.to_string(),
            sigma: sigma.clone(),
            condition: None,
            b: BTreeMap::new(),
            u: vec![],
            matrix: vec![],
            methods: vec![],
            kernel: vec![],
            kernel_loss: 0,
            constants: vec![],
            discs: vec![],
            candidates: vec![],
            error: Some(ErrorRecord::from(e)),
        }
    }

    pub fn unresolved(&self) -> usize {
        self.discs.iter().filter(|d| d.status == "unresolved").count()
    }
}

/// The output of `solve`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub p: u32,
    pub precision: i64,
    pub types: Vec<TypeReport>,
    /// ∫_G ω_j per generator, in the problem-file format so it can be fed
    /// back as `imported_integrals`.
    pub integrals: Vec<ImportedIntegral>,
    /// Known points never produced by any type.
    pub unmatched_known: Vec<String>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

impl Report {
    pub fn empty(file: &ProblemFile, p: Option<u32>, prec: Option<i64>) -> Self {
        Report {
            name: file.name.clone(),
            p: p.unwrap_or(file.arithmetic.p),
            precision: prec.unwrap_or(file.arithmetic.precision),
            types: vec![],
            integrals: vec![],
            unmatched_known: vec![],
            status: "error".into(),
            error: None,
        }
    }

    pub(super) fn finish(&mut self, outcome: Outcome, known: &[MarkedPoint]) {
        self.status = match outcome {
            Outcome::Complete => "complete",
            Outcome::Partial => "partial",
            Outcome::Error => "error",
        }
        .into();
        let matched: Vec<String> =
            self.types.iter().flat_map(|t| t.candidates.iter().filter_map(|c| c.known.clone())).collect();
        self.unmatched_known = known
            .iter()
            .filter(|k| !matched.contains(&k.point.to_string()))
            .map(|k| k.id.clone())
            .collect();
    }

    /// All locus points of type `kind`, over every reported type.
    pub fn candidates_of(&self, kind: CandidateKind) -> Vec<&CandidateReport> {
        self.types.iter().flat_map(|t| t.candidates.iter()).filter(|c| c.kind == kind).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub id: String,
    pub point: String,
    pub sigma: String,
    /// ∫_{P₀}^P ω − c for each annihilator.
    pub values: Vec<String>,
    pub valuation: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeterminantReport {
    pub points: Vec<String>,
    pub value: String,
    pub valuation: i64,
    pub pass: bool,
}

/// The output of `verify`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub precision: i64,
    /// Valuation a vanishing quantity must reach.
    pub threshold: i64,
    pub points: Vec<PointCheck>,
    pub determinants: Vec<DeterminantReport>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}
