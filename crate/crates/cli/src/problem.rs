//! Problem files: TOML input for a single analysis.

use std::path::Path;

use pfext::{
    parse_constant_as, parse_operator_as, parse_rational_as, BasePoint, Complex64, ContinuationConfig, Operator64,
    RationalFunction64, Tolerances,
};
use serde::{Deserialize, Serialize};

use crate::exit::Failure;
use crate::report::ReportFile;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub operator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inhomogeneity: Option<String>,
    /// `"auto"` or a constant expression such as `"1/2 + i"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    /// Jet of the particular solution at the base point, one constant
    /// expression per coordinate. Defaults to the zero jet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_jet: Option<Vec<String>>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
}

/// Expected outcome, checked by `corpus run`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default)]
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl Expect {
    pub fn matches(&self, report: &ReportFile) -> bool {
        let verdict = report.extension.as_ref().map(|e| e.class.verdict.as_str());
        report.exit_code == self.exit_code && self.verdict.as_deref().is_none_or(|v| verdict == Some(v))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Maximal Taylor order per step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taylor_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clearance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unipotent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom_row: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
}

/// Command-line overrides; these win over the problem file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision_target: Option<f64>,
    pub theta: Option<f64>,
    pub taylor_order: Option<usize>,
    pub clearance: Option<f64>,
    pub tol_class: Option<f64>,
    pub seed: Option<u64>,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl ProblemFile {
    pub fn from_toml(src: &str) -> Result<Self, Failure> {
        let p: ProblemFile = toml::from_str(src).map_err(|e| Failure::parse(e.to_string()))?;
        if p.operator.trim().is_empty() {
            return Err(Failure::parse("operator expression is empty"));
        }
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let src = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        Self::from_toml(&src)
    }

    pub fn with_overrides(mut self, o: &Overrides) -> Self {
        let n = &mut self.numerics;
        n.precision_target = o.precision_target.or(n.precision_target);
        n.theta = o.theta.or(n.theta);
        n.taylor_order = o.taylor_order.or(n.taylor_order);
        n.clearance = o.clearance.or(n.clearance);
        n.seed = o.seed.or(n.seed);
        self.tolerances.class = o.tol_class.or(self.tolerances.class);
        self
    }

    pub fn config(&self) -> ContinuationConfig {
        let d = ContinuationConfig::default();
        let n = &self.numerics;
        let max_order = n.taylor_order.unwrap_or(d.max_order);
        ContinuationConfig {
            theta: n.theta.unwrap_or(d.theta),
            min_order: d.min_order.min(max_order),
            max_order,
            precision_target: n.precision_target.unwrap_or(d.precision_target),
            clearance: n.clearance.or(d.clearance),
            ..d
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        let t = &self.tolerances;
        Tolerances {
            unipotent: t.unipotent.unwrap_or(d.unipotent),
            irreducible: t.irreducible.unwrap_or(d.irreducible),
            class: t.class.unwrap_or(d.class),
            eigenvalue: t.eigenvalue.unwrap_or(d.eigenvalue),
            bottom_row: t.bottom_row.unwrap_or(d.bottom_row),
            rank: t.rank.unwrap_or(d.rank),
        }
    }

    pub fn seed(&self) -> u64 {
        self.numerics.seed.unwrap_or(DEFAULT_SEED)
    }

    /// The problem with every numeric knob spelled out, so that a report can
    /// be re-run from its echo alone.
    pub fn resolved(&self) -> Self {
        let cfg = self.config();
        let tol = self.tolerances();
        Self {
            base_point: Some(self.base_point.clone().unwrap_or_else(|| "auto".into())),
            numerics: Numerics {
                theta: Some(cfg.theta),
                taylor_order: Some(cfg.max_order),
                precision_target: Some(cfg.precision_target),
                clearance: cfg.clearance,
                seed: Some(self.seed()),
            },
            tolerances: ToleranceOverrides {
                class: Some(tol.class),
                unipotent: Some(tol.unipotent),
                irreducible: Some(tol.irreducible),
                eigenvalue: Some(tol.eigenvalue),
                bottom_row: Some(tol.bottom_row),
                rank: Some(tol.rank),
            },
            ..self.clone()
        }
    }

    pub fn parse_operator(&self) -> Result<Operator64, Failure> {
        let d = parse_operator_as::<f64>(&self.operator).map_err(|e| Failure::parse_in("operator", e))?;
        d.require_order(1).map_err(|e| Failure::parse_in("operator", e))?;
        Ok(d)
    }

    pub fn parse_inhomogeneity(&self) -> Result<Option<RationalFunction64>, Failure> {
        self.inhomogeneity
            .as_deref()
            .map(|g| parse_rational_as::<f64>(g).map_err(|e| Failure::parse_in("inhomogeneity", e)))
            .transpose()
    }

    pub fn parse_base_point(&self) -> Result<BasePoint<f64>, Failure> {
        match self.base_point.as_deref().map(str::trim) {
            None | Some("auto") => Ok(BasePoint::Auto),
            Some(src) => parse_constant_as::<f64>(src)
                .map(BasePoint::At)
                .map_err(|e| Failure::parse_in("base_point", e)),
        }
    }

    pub fn parse_initial_jet(&self) -> Result<Option<Vec<Complex64>>, Failure> {
        self.initial_jet
            .as_ref()
            .map(|jet| {
                jet.iter()
                    .map(|c| parse_constant_as::<f64>(c).map_err(|e| Failure::parse_in("initial_jet", e)))
                    .collect()
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_parses() {
        let p = ProblemFile::from_toml("name = \"x\"\noperator = \"t*D - 1/3\"\n").unwrap();
        assert_eq!(p.inhomogeneity, None);
        assert!(matches!(p.parse_base_point().unwrap(), BasePoint::Auto));
        assert_eq!(p.parse_operator().unwrap().order(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ProblemFile::from_toml("name = \"x\"\noperator = \"D\"\nfoo = 1\n").is_err());
    }

    #[test]
    fn overrides_win_and_resolve() {
        let p = ProblemFile::from_toml("name = \"x\"\noperator = \"D\"\n[numerics]\ntheta = 0.3\n").unwrap();
        let p = p.with_overrides(&Overrides {
            theta: Some(0.25),
            tol_class: Some(1e-5),
            ..Default::default()
        });
        let r = p.resolved();
        assert_eq!(r.numerics.theta, Some(0.25));
        assert_eq!(r.tolerances.class, Some(1e-5));
        assert_eq!(r.base_point.as_deref(), Some("auto"));
        assert_eq!(r.config().max_order, ContinuationConfig::default().max_order);
        let again = ProblemFile::from_toml(&toml::to_string(&r).unwrap()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn order_zero_operator_is_a_parse_error() {
        let p = ProblemFile::from_toml("name = \"x\"\noperator = \"t\"\n").unwrap();
        assert_eq!(p.parse_operator().unwrap_err().code, crate::exit::ExitCode::Parse);
    }

    #[test]
    fn explicit_base_point() {
        let p = ProblemFile::from_toml("name = \"x\"\noperator = \"D\"\nbase_point = \"1/2 + i\"\n").unwrap();
        let BasePoint::At(z) = p.parse_base_point().unwrap() else { panic!() };
        assert_eq!(z, Complex64::new(0.5, 1.0));
    }
}
