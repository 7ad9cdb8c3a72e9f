use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arithmodel::{GeneratorSpec, MarkedPoint, RegularModel, RegularModelData};
use crate::chabauty::{ArithmeticData, MordellWeilGenerator};
use crate::curvegeom::{CurveProblem, Family, RationalPoint};
use crate::error::{Error, Result};
use crate::padic::parse_padic;
use crate::qlinalg::{parse_rational, QPoly};

pub const SCHEMA_VERSION: u32 = 1;

fn default_precision() -> i64 {
    12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CurveSpec {
    /// y² = f(x), coefficients from the constant term up.
    Hyperelliptic { f: Vec<String> },
    /// y³ = x³ + a·x² + x.
    Superelliptic { a: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticSpec {
    #[serde(rename = "S", default)]
    pub s: Vec<u64>,
    pub p: u32,
    #[serde(default = "default_precision")]
    pub precision: i64,
    /// Mordell–Weil rank of the Jacobian.
    pub rank: usize,
    /// Id of the base point in `points`.
    pub base_point: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorSpec {
    pub id: String,
    /// (multiplicity, point id) pairs.
    pub support: Vec<(i64, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsSpec {
    #[serde(default)]
    pub mordell_weil: Vec<DivisorSpec>,
    /// Unit generators, one value per cusp name.
    #[serde(default)]
    pub units: Vec<BTreeMap<String, GeneratorSpec>>,
}

/// ∫_G ω_j for one generator, as digit strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportedIntegral {
    pub generator: String,
    pub values: Vec<String>,
}

/// A problem file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub schema: u32,
    #[serde(default)]
    pub name: String,
    pub curve: CurveSpec,
    pub arithmetic: ArithmeticSpec,
    /// Named rational points as [x, y].
    pub points: BTreeMap<String, [String; 2]>,
    #[serde(default)]
    pub generators: GeneratorsSpec,
    #[serde(default)]
    pub model: RegularModelData,
    #[serde(default)]
    pub imported_integrals: Vec<ImportedIntegral>,
    /// Ids of known S-integral points.
    #[serde(default)]
    pub known_points: Vec<String>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub name: String,
    pub problem: CurveProblem,
    pub data: ArithmeticData,
    pub known: Vec<MarkedPoint>,
}

impl ProblemFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("problem file: {e}")))?;
        if f.schema != SCHEMA_VERSION {
            return Err(Error::Invalid(format!("schema {} is not supported (expected {SCHEMA_VERSION})", f.schema)));
        }
        Ok(f)
    }

    pub fn family(&self) -> Result<Family> {
        match &self.curve {
            CurveSpec::Hyperelliptic { f } => Ok(Family::Hyperelliptic { f: QPoly::from_strs(f)? }),
            CurveSpec::Superelliptic { a } => {
                let a: BigInt = a.trim().parse().map_err(|_| Error::Invalid(format!("bad integer a = {a}")))?;
                Ok(Family::Superelliptic { a })
            }
        }
    }

    fn point(&self, id: &str) -> Result<MarkedPoint> {
        let [x, y] = self.points.get(id).ok_or_else(|| Error::Invalid(format!("unknown point id {id}")))?;
        Ok(MarkedPoint::new(id, RationalPoint::new(parse_rational(x)?, parse_rational(y)?)))
    }

    /// Validates everything, with optional overrides of p and N.
    pub fn load(&self, p: Option<u32>, prec: Option<i64>) -> Result<LoadedProblem> {
        let a = &self.arithmetic;
        let p = p.unwrap_or(a.p);
        let prec = prec.unwrap_or(a.precision);
        let base = self.point(&a.base_point)?;
        let problem = CurveProblem::new(self.family()?, base.point.clone(), a.s.clone(), p, prec, a.rank)?;
        for id in self.points.keys() {
            let pt = self.point(id)?;
            if !problem.contains(&pt.point) {
                return Err(Error::Invalid(format!("point {id} = {} is not on the curve", pt.point)));
            }
        }
        let mut model_data = self.model.clone();
        model_data.base_object = a.base_point.clone();
        let model = RegularModel::new(&model_data, &problem)?;
        let mut imported: BTreeMap<&str, &ImportedIntegral> = BTreeMap::new();
        for t in &self.imported_integrals {
            imported.insert(&t.generator, t);
        }
        let mut mordell_weil = Vec::new();
        for g in &self.generators.mordell_weil {
            let support = g.support.iter().map(|(n, id)| Ok((*n, self.point(id)?))).collect::<Result<Vec<_>>>()?;
            if support.iter().map(|(n, _)| n).sum::<i64>() != 0 {
                return Err(Error::Invalid(format!("generator {} does not have degree zero", g.id)));
            }
            let imported = match imported.remove(g.id.as_str()) {
                Some(t) => Some(t.values.iter().map(|s| parse_padic(s, Some(p))).collect::<Result<Vec<_>>>()?),
                None => None,
            };
            mordell_weil.push(MordellWeilGenerator { id: g.id.clone(), support, imported });
        }
        if let Some(id) = imported.keys().next() {
            return Err(Error::Invalid(format!("imported integrals for unknown generator {id}")));
        }
        let mut units = Vec::new();
        for u in &self.generators.units {
            let mut vals = Vec::new();
            for c in &problem.cusps {
                let g = u.get(&c.name).ok_or_else(|| Error::Invalid(format!("unit generator lacks cusp {}", c.name)))?;
                vals.push(g.parse()?);
            }
            units.push(vals);
        }
        let known = self.known_points.iter().map(|id| self.point(id)).collect::<Result<Vec<_>>>()?;
        let data = ArithmeticData { base, s: a.s.clone(), mordell_weil, units, model };
        Ok(LoadedProblem { name: self.name.clone(), problem, data, known })
    }
}
