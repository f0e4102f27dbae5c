//! JSON report layout. Complex numbers are `[re, im]` pairs and matrices are
//! row-major lists of rows.

use std::collections::BTreeMap;

use pfext::linalg::{CMatrix, CVector};
use pfext::singular::PointKind;
use pfext::{Complex64, Location};
use serde::{Deserialize, Serialize};

use crate::exit::Failure;
use crate::problem::ProblemFile;

pub type C = [f64; 2];
pub type Matrix = Vec<Vec<C>>;

pub fn c(z: Complex64) -> C {
    [z.re, z.im]
}

pub fn from_c(z: C) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn cs(zs: &[Complex64]) -> Vec<C> {
    zs.iter().copied().map(c).collect()
}

pub fn vector(v: &CVector<f64>) -> Vec<C> {
    v.iter().copied().map(c).collect()
}

pub fn from_vector(v: &[C]) -> CVector<f64> {
    CVector::from_iterator(v.len(), v.iter().copied().map(from_c))
}

pub fn matrix(m: &CMatrix<f64>) -> Matrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| c(m[(i, j)])).collect()).collect()
}

pub fn from_matrix(rows: &Matrix) -> CMatrix<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(n, m, |i, j| from_c(rows[i][j]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Place {
    Finite(C),
    Named(String),
}

impl From<&Location<f64>> for Place {
    fn from(l: &Location<f64>) -> Self {
        match l {
            Location::Finite(z) => Place::Finite(c(*z)),
            Location::Infinity => Place::Named("infinity".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub pfext: String,
    pub cli: String,
}

impl Versions {
    pub fn current() -> Self {
        Self {
            pfext: pfext::VERSION.into(),
            cli: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub loops: String,
    pub action: String,
    pub cocycle: String,
}

impl Conventions {
    pub fn current() -> Self {
        Self {
            loops: pfext::monodromy::LOOP_CONVENTION.into(),
            action: pfext::monodromy::ACTION_CONVENTION.into(),
            cocycle: pfext::extension::COCYCLE_CONVENTION.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    pub versions: Versions,
    pub conventions: Conventions,
    /// The resolved problem; re-running it reproduces this report.
    pub problem: ProblemFile,
    pub analysis: Option<AnalysisSection>,
    pub monodromy: Option<MonodromySection>,
    pub extension: Option<ExtensionSection>,
    /// Stages not run, with the reason.
    pub skipped: Vec<Skipped>,
    pub diagnostics: Vec<Failure>,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSection {
    pub location: Place,
    pub kind: String,
    pub exponents: Vec<C>,
}

pub fn kind_name(k: PointKind) -> &'static str {
    match k {
        PointKind::Ordinary => "ordinary",
        PointKind::RegularSingular => "regular_singular",
        PointKind::Irregular => "irregular",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSection {
    pub order: usize,
    pub fuchsian: bool,
    pub irregular: Vec<Place>,
    pub points: Vec<PointSection>,
    pub separation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSection {
    pub point: C,
    pub radius: f64,
    pub vertices: Vec<C>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopPlanSection {
    pub base: C,
    pub clearance: f64,
    pub loops: Vec<LoopSection>,
    pub infinity_loop: Option<Vec<C>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSection {
    pub point: C,
    pub matrix: Matrix,
    pub error: f64,
}

/// Monodromy around infinity from the product relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfinitySection {
    pub matrix: Matrix,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyPoint {
    pub location: Place,
    pub eigenvalues: Vec<C>,
    pub expected: Vec<C>,
    pub distance: f64,
    pub determinant: C,
    pub expected_determinant: C,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencySection {
    pub tolerance: f64,
    pub points: Vec<ConsistencyPoint>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnipotencySection {
    pub location: Place,
    pub norm: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilitySection {
    pub unipotent: Vec<UnipotencySection>,
    pub unipotent_pass: bool,
    pub irreducible: Option<bool>,
    /// Irreducibility is decided numerically, not proven.
    pub irreducible_heuristic: bool,
    pub algebra_dimension: usize,
    pub common_eigenvector_residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfinityCheckSection {
    pub direct: Vec<C>,
    pub from_product: Vec<C>,
    pub distance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromySection {
    pub plan: LoopPlanSection,
    pub dim: usize,
    pub generators: Vec<GeneratorSection>,
    pub infinity: InfinitySection,
    pub traces: Vec<C>,
    pub relation_residual: f64,
    pub consistency: ConsistencySection,
    pub admissibility: AdmissibilitySection,
    pub infinity_check: Option<InfinityCheckSection>,
    /// Set when the representation is trivial without any continuation.
    pub short_circuit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleSection {
    pub vectors: Vec<Vec<C>>,
    pub errors: Vec<f64>,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSection {
    pub extended_operator: Option<String>,
    pub matrices: Vec<Matrix>,
    pub bottom_row_deviation: Vec<f64>,
    pub cocycle: CocycleSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSection {
    pub verdict: String,
    pub witness: Option<Vec<C>>,
    pub residual: f64,
    pub twist: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementSection {
    pub max_difference: f64,
    pub combined_error: f64,
    pub vectors_agree: bool,
    pub class_verdict: String,
    pub class_residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationSection {
    pub infinity_shift: Vec<C>,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Recomputation of the cocycle from a seeded random initial jet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftingProbe {
    pub seed: u64,
    pub jet: Vec<C>,
    pub deviation: f64,
    pub bound: f64,
    pub verdict: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSection {
    pub initial_jet: Vec<C>,
    pub continuation: CocycleSection,
    pub block: BlockSection,
    pub class: ClassSection,
    pub agreement: AgreementSection,
    pub relation: RelationSection,
    pub lifting_probe: LiftingProbe,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, Failure> {
        serde_json::from_str(src).map_err(|e| Failure::parse(format!("report: {e}")))
    }

    /// Whether every matrix and vector entry is finite. Non-finite floats
    /// serialize as `null`, which is only legitimate for absent options.
    pub fn is_finite(&self) -> bool {
        fn walk(v: &serde_json::Value) -> bool {
            match v {
                serde_json::Value::Null => false,
                serde_json::Value::Number(n) => n.as_f64().is_some_and(f64::is_finite),
                serde_json::Value::Array(a) => a.iter().all(walk),
                serde_json::Value::Object(o) => o.values().all(|v| v.is_null() || walk(v)),
                _ => true,
            }
        }
        walk(&serde_json::to_value(self).expect("report serializes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_are_row_major() {
        let m = CMatrix::<f64>::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(4.0, -1.0),
            ],
        );
        let rows = matrix(&m);
        assert_eq!(rows[0][1], [2.0, 0.0]);
        assert_eq!(rows[1][1], [4.0, -1.0]);
        assert_eq!(from_matrix(&rows), m);
    }

    #[test]
    fn places_serialize_as_pairs_or_names() {
        let f = serde_json::to_string(&Place::from(&Location::Finite(Complex64::new(1.0, 0.5)))).unwrap();
        assert_eq!(f, "[1.0,0.5]");
        let i = serde_json::to_string(&Place::from(&Location::<f64>::Infinity)).unwrap();
        assert_eq!(i, "\"infinity\"");
    }
}
