//! Class comparison of two stored extension reports.

use pfext::continuation::PathPolyline;
use pfext::linalg;
use pfext::monodromy::{GeneratorLoop, LoopPlan, ACTION_CONVENTION, LOOP_CONVENTION};
use pfext::{class_equal, MonodromyRepresentation64, Verdict};
use serde::{Deserialize, Serialize};

use crate::exit::{ExitCode, Failure};
use crate::pipeline::cocycle_from_section;
use crate::report::*;

/// Matrices of the two reports must agree to this many combined error
/// estimates, plus an absolute floor.
const MATRIX_SLACK: f64 = 10.0;
const MATRIX_FLOOR: f64 = 1e-9;
const BASE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub comparable: bool,
    pub equal: bool,
    pub reason: Option<String>,
    pub verdict: Option<String>,
    pub residual: Option<f64>,
    pub exit_code: i32,
}

impl Comparison {
    fn not_comparable(reason: impl Into<String>) -> Self {
        Self {
            comparable: false,
            equal: false,
            reason: Some(reason.into()),
            verdict: None,
            residual: None,
            exit_code: ExitCode::NotEqual.code(),
        }
    }
}

/// Rebuilds the monodromy representation stored in a report.
pub fn representation(section: &MonodromySection) -> Result<MonodromyRepresentation64, Failure> {
    let plan = &section.plan;
    let loops = plan
        .loops
        .iter()
        .map(|l| {
            Ok(GeneratorLoop {
                point: from_c(l.point),
                radius: l.radius,
                path: PathPolyline::new(l.vertices.iter().copied().map(from_c).collect())?,
            })
        })
        .collect::<Result<Vec<_>, pfext::Error>>()?;
    let infinity_loop = plan
        .infinity_loop
        .as_ref()
        .map(|v| PathPolyline::new(v.iter().copied().map(from_c).collect()))
        .transpose()?;
    Ok(MonodromyRepresentation64 {
        plan: LoopPlan {
            base: from_c(plan.base),
            clearance: plan.clearance,
            loops,
            infinity_loop,
            convention: LOOP_CONVENTION,
        },
        dim: section.dim,
        matrices: section.generators.iter().map(|g| from_matrix(&g.matrix)).collect(),
        errors: section.generators.iter().map(|g| g.error).collect(),
        infinity: from_matrix(&section.infinity.matrix),
        infinity_error: section.infinity.error,
        convention: ACTION_CONVENTION,
    })
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (from_c(a) - from_c(b)).norm()
}

/// Whether the two reports carry cohomologous cocycles for the same
/// representation. `tol_class` overrides the class tolerance of `a`.
pub fn compare(a: &ReportFile, b: &ReportFile, tol_class: Option<f64>) -> Result<Comparison, Failure> {
    if a.conventions != b.conventions {
        return Ok(Comparison::not_comparable("convention tokens differ"));
    }
    let (Some(ma), Some(mb), Some(ea), Some(eb)) = (&a.monodromy, &b.monodromy, &a.extension, &b.extension) else {
        return Ok(Comparison::not_comparable("both reports need monodromy and extension sections"));
    };
    if ma.dim != mb.dim || ma.generators.len() != mb.generators.len() {
        return Ok(Comparison::not_comparable(format!(
            "representations differ in shape: {}x{} vs {}x{}",
            ma.generators.len(),
            ma.dim,
            mb.generators.len(),
            mb.dim
        )));
    }
    if distance(ma.plan.base, mb.plan.base) > BASE_TOL {
        return Ok(Comparison::not_comparable(format!(
            "base points differ: {:?} vs {:?}",
            ma.plan.base, mb.plan.base
        )));
    }
    for (k, (ga, gb)) in ma.generators.iter().zip(&mb.generators).enumerate() {
        if distance(ga.point, gb.point) > BASE_TOL {
            return Ok(Comparison::not_comparable(format!("generator {k} encircles different punctures")));
        }
        let d = linalg::distance(&from_matrix(&ga.matrix), &from_matrix(&gb.matrix));
        if d > MATRIX_SLACK * (ga.error + gb.error) + MATRIX_FLOOR {
            return Ok(Comparison::not_comparable(format!("monodromy matrices of generator {k} differ by {d:.3e}")));
        }
    }
    let rep = representation(ma)?;
    let mut tol = a.problem.tolerances();
    if let Some(t) = tol_class {
        tol.class = t;
    }
    let result = class_equal(
        &rep,
        &cocycle_from_section(&ea.continuation),
        &cocycle_from_section(&eb.continuation),
        &tol,
    )?;
    let code = match result.verdict {
        Verdict::Trivial => ExitCode::Success,
        Verdict::Nontrivial => ExitCode::NotEqual,
        Verdict::Inconclusive => ExitCode::Inconclusive,
    };
    Ok(Comparison {
        comparable: true,
        equal: result.verdict == Verdict::Trivial,
        reason: None,
        verdict: Some(result.verdict.as_str().into()),
        residual: Some(result.residual),
        exit_code: code.code(),
    })
}
