//! Orchestration of the analyze, monodromy and extension commands.

use std::collections::BTreeMap;
use std::time::Instant;

use pfext::extension::{cocycle_with_initial_jet, extension_class, relation_check_with_jet, Cocycle};
use pfext::linalg::{self, CVector};
use pfext::monodromy::{infinity_direct_check, profile_loops};
use pfext::singular::fuchsian_report;
use pfext::{
    admissibility_check, analyze_extension, is_coboundary, local_consistency_check, monodromy_representation,
    shift_by_coboundary, singularities, Complex64, ContinuationConfig, InhomogeneousProblem, Location,
    MonodromyRepresentation64, Operator64, SingularityProfile, Tolerances, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exit::{ExitCode, Failure};
use crate::problem::ProblemFile;
use crate::report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Monodromy,
    Extension,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Monodromy => "monodromy",
            Command::Extension => "extension",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub timings: bool,
}

/// Absolute bound for the lifting probe.
pub const LIFTING_TOL: f64 = 1e-8;

struct Timer {
    enabled: bool,
    start: Instant,
    stages: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Self {
            enabled,
            start: Instant::now(),
            stages: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        if self.enabled {
            let now = Instant::now();
            self.stages.insert(stage.into(), (now - self.start).as_secs_f64() * 1e3);
            self.start = now;
        }
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.stages)
    }
}

/// Runs `command` on `problem` and assembles the report. Failures are
/// recorded as diagnostics; the report is always produced.
pub fn run(problem: &ProblemFile, command: Command, options: Options) -> ReportFile {
    let resolved = problem.resolved();
    let mut report = ReportFile {
        command: command.name().into(),
        versions: Versions::current(),
        conventions: Conventions::current(),
        problem: resolved.clone(),
        analysis: None,
        monodromy: None,
        extension: None,
        skipped: Vec::new(),
        diagnostics: Vec::new(),
        exit_code: 0,
        timings_ms: None,
    };
    let mut timer = Timer::new(options.timings);
    let code = match stages(&resolved, command, &mut report, &mut timer) {
        Ok(code) => code,
        Err(f) => {
            let code = f.code;
            report.diagnostics.push(f);
            code
        }
    };
    let code = if report.is_finite() {
        code
    } else {
        report
            .diagnostics
            .push(Failure::new(ExitCode::Numerical, "NonFiniteResult", "report contains non-finite numbers"));
        code.worst(ExitCode::Numerical)
    };
    report.exit_code = code.code();
    report.timings_ms = timer.finish();
    report
}

fn skip(report: &mut ReportFile, stages: &[Command], reason: &str) {
    for s in stages {
        report.skipped.push(Skipped {
            stage: s.name().into(),
            reason: reason.into(),
        });
    }
}

fn stages(p: &ProblemFile, command: Command, report: &mut ReportFile, timer: &mut Timer) -> Result<ExitCode, Failure> {
    let d = p.parse_operator()?;
    let g = p.parse_inhomogeneity()?;
    let base = p.parse_base_point()?;
    let jet = p.parse_initial_jet()?;
    if command == Command::Extension && g.is_none() {
        return Err(Failure::parse("extension requires an inhomogeneity"));
    }
    let config = p.config();
    let tol = p.tolerances();

    let profile = singularities(&d)?;
    let fuchs = fuchsian_report(&profile);
    report.analysis = Some(analysis_section(&profile, fuchs.per_point.iter().filter(|(_, ok)| !ok).map(|(l, _)| l)));
    timer.lap("analysis");
    let downstream: &[Command] = match command {
        Command::Analyze => &[],
        Command::Monodromy => &[Command::Monodromy],
        Command::Extension => &[Command::Monodromy, Command::Extension],
    };
    if !fuchs.fuchsian {
        let irregular: Vec<String> =
            fuchs.per_point.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.to_string()).collect();
        let reason = format!("operator is not Fuchsian: irregular at {}", irregular.join(", "));
        skip(report, downstream, &reason);
        return Err(Failure::new(ExitCode::NonFuchsian, "NonFuchsian", reason));
    }

    match command {
        Command::Analyze => Ok(ExitCode::Success),
        Command::Monodromy => {
            let plan = profile_loops(&profile, base, &config)?;
            let rep = monodromy_representation(&d, &plan, &config)?;
            timer.lap("monodromy");
            let section = monodromy_section(&d, &profile, &rep, &config, &tol)?;
            timer.lap("checks");
            let code = check_code(report, section.consistency.pass, "consistency check failed");
            report.monodromy = Some(section);
            Ok(code)
        }
        Command::Extension => {
            let g = g.expect("checked above");
            let problem = InhomogeneousProblem::new(d.clone(), g, p.twist)?;
            let analysis = analyze_extension(&problem, base, &config, &tol)?;
            timer.lap("extension");
            let rep = &analysis.representation;
            let section = monodromy_section(&d, &profile, rep, &config, &tol)?;
            let mut code = check_code(report, section.consistency.pass, "consistency check failed");
            report.monodromy = Some(section);

            let jet = CVector::from_vec(jet.unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); problem.order()]));
            let cocycle = if jet.iter().all(|z| z.norm() == 0.0) {
                analysis.continuation.clone()
            } else {
                cocycle_with_initial_jet(&problem, rep, &jet, &config)?
            };
            let class = extension_class(&problem, rep, cocycle.clone(), &tol)?;
            let relation = relation_check_with_jet(&problem, rep, &cocycle, &jet, &config)?;
            let probe = lifting_probe(&problem, rep, &cocycle, &jet, &class.verdict, &config, &tol, p.seed())?;
            timer.lap("extension_checks");

            let relation_pass = relation.residual <= 10.0 * relation.bound;
            let block = &analysis.block;
            let ag = &analysis.agreement;
            report.extension = Some(ExtensionSection {
                initial_jet: vector(&jet),
                continuation: cocycle_section(&cocycle),
                block: BlockSection {
                    extended_operator: block.extended.as_ref().map(|e| e.to_string()),
                    matrices: block.matrices.iter().map(matrix).collect(),
                    bottom_row_deviation: block.bottom_row_deviation.clone(),
                    cocycle: cocycle_section(&block.cocycle),
                },
                class: ClassSection {
                    verdict: class.verdict.as_str().into(),
                    witness: class.witness.as_ref().map(vector),
                    residual: class.residual,
                    twist: class.twist,
                },
                agreement: AgreementSection {
                    max_difference: ag.max_difference,
                    combined_error: ag.combined_error,
                    vectors_agree: ag.vectors_agree,
                    class_verdict: ag.class.verdict.as_str().into(),
                    class_residual: ag.class.residual,
                    pass: ag.pass,
                },
                relation: RelationSection {
                    infinity_shift: vector(&relation.infinity_shift),
                    residual: relation.residual,
                    bound: relation.bound,
                    pass: relation_pass,
                },
                lifting_probe: probe.clone(),
            });
            code = code.worst(check_code(report, ag.pass, "cocycle routes disagree"));
            code = code.worst(check_code(report, relation_pass, "relation word cocycle is not zero"));
            code = code.worst(check_code(report, probe.pass, "lifting probe changed the class"));
            if class.verdict == Verdict::Inconclusive || ag.class.verdict == Verdict::Inconclusive {
                report.diagnostics.push(Failure::new(
                    ExitCode::Inconclusive,
                    "InconclusiveVerdict",
                    format!("class residual {:.3e} lies within a factor 10 of the tolerance", class.residual),
                ));
                code = code.worst(ExitCode::Inconclusive);
            }
            Ok(code)
        }
    }
}

fn check_code(report: &mut ReportFile, pass: bool, message: &str) -> ExitCode {
    if pass {
        ExitCode::Success
    } else {
        report.diagnostics.push(Failure::new(ExitCode::Numerical, "CheckFailed", message));
        ExitCode::Numerical
    }
}

fn analysis_section<'a>(
    profile: &SingularityProfile<f64>,
    irregular: impl Iterator<Item = &'a Location<f64>>,
) -> AnalysisSection {
    AnalysisSection {
        order: profile.operator.order(),
        fuchsian: profile.points.iter().all(|p| p.is_regular()),
        irregular: irregular.map(Place::from).collect(),
        points: profile
            .points
            .iter()
            .map(|p| PointSection {
                location: Place::from(&p.location),
                kind: kind_name(p.kind).into(),
                exponents: cs(&p.exponents),
            })
            .collect(),
        separation: profile.separation,
    }
}

pub fn monodromy_section(
    d: &Operator64,
    profile: &SingularityProfile<f64>,
    rep: &MonodromyRepresentation64,
    config: &ContinuationConfig,
    tol: &Tolerances,
) -> Result<MonodromySection, Failure> {
    let plan = &rep.plan;
    let consistency = local_consistency_check(rep, profile, tol)?;
    let boundary: Vec<Location<f64>> = profile.finite_points().into_iter().map(Location::Finite).collect();
    let adm = admissibility_check(rep, &boundary, tol)?;
    let (infinity_check, short_circuit) = if plan.loops.is_empty() {
        (None, Some("no finite punctures: the representation is trivial".to_string()))
    } else {
        let ic = infinity_direct_check(d, rep, config, tol)?;
        (
            Some(InfinityCheckSection {
                direct: cs(&ic.direct),
                from_product: cs(&ic.from_product),
                distance: ic.distance,
                pass: ic.pass,
            }),
            None,
        )
    };
    Ok(MonodromySection {
        plan: LoopPlanSection {
            base: c(plan.base),
            clearance: plan.clearance,
            loops: plan
                .loops
                .iter()
                .map(|l| LoopSection {
                    point: c(l.point),
                    radius: l.radius,
                    vertices: cs(l.path.vertices()),
                })
                .collect(),
            infinity_loop: plan.infinity_loop.as_ref().map(|p| cs(p.vertices())),
        },
        dim: rep.dim,
        generators: plan
            .loops
            .iter()
            .zip(rep.matrices.iter().zip(&rep.errors))
            .map(|(l, (m, e))| GeneratorSection {
                point: c(l.point),
                matrix: matrix(m),
                error: *e,
            })
            .collect(),
        infinity: InfinitySection {
            matrix: matrix(&rep.infinity),
            error: rep.infinity_error,
        },
        traces: rep.matrices.iter().map(|m| c(linalg::trace(m))).collect(),
        relation_residual: rep.relation_residual(),
        consistency: ConsistencySection {
            tolerance: consistency.tolerance,
            points: consistency
                .points
                .iter()
                .map(|p| ConsistencyPoint {
                    location: Place::from(&p.location),
                    eigenvalues: cs(&p.eigenvalues),
                    expected: cs(&p.expected),
                    distance: p.distance,
                    determinant: c(p.determinant),
                    expected_determinant: c(p.expected_determinant),
                    pass: p.pass,
                })
                .collect(),
            pass: consistency.pass,
        },
        admissibility: AdmissibilitySection {
            unipotent: adm
                .unipotent
                .iter()
                .map(|u| UnipotencySection {
                    location: Place::from(&u.location),
                    norm: u.norm,
                    pass: u.pass,
                })
                .collect(),
            unipotent_pass: adm.unipotent_pass,
            irreducible: adm.irreducible,
            irreducible_heuristic: adm.irreducible_heuristic,
            algebra_dimension: adm.algebra_dimension,
            common_eigenvector_residual: finite_or_max(adm.common_eigenvector_residual),
            pass: adm.pass,
        },
        infinity_check,
        short_circuit,
    })
}

fn finite_or_max(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

pub fn cocycle_section(a: &Cocycle<f64>) -> CocycleSection {
    CocycleSection {
        vectors: a.vectors.iter().map(vector).collect(),
        errors: a.errors.clone(),
        scale: a.scale,
    }
}

pub fn cocycle_from_section(s: &CocycleSection) -> Cocycle<f64> {
    Cocycle {
        vectors: s.vectors.iter().map(|v| from_vector(v)).collect(),
        errors: s.errors.clone(),
        scale: s.scale,
    }
}

/// Seeded random jet with entries in the unit square.
pub fn random_jet(rng: &mut ChaCha8Rng, n: usize) -> CVector<f64> {
    CVector::from_fn(n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

#[allow(clippy::too_many_arguments)]
fn lifting_probe(
    problem: &InhomogeneousProblem<f64>,
    rep: &MonodromyRepresentation64,
    cocycle: &Cocycle<f64>,
    jet: &CVector<f64>,
    verdict: &Verdict,
    config: &ContinuationConfig,
    tol: &Tolerances,
    seed: u64,
) -> Result<LiftingProbe, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_jet(&mut rng, problem.order());
    let (deviation, bound, probe_verdict) = if problem.is_degenerate() {
        (0.0, 0.0, *verdict)
    } else {
        let recomputed = cocycle_with_initial_jet(problem, rep, &(jet + &v), config)?;
        let shifted = shift_by_coboundary(rep, cocycle, &v)?;
        let (dev, err) = recomputed.max_distance(&shifted);
        (dev, err, is_coboundary(rep, &recomputed, tol)?.verdict)
    };
    Ok(LiftingProbe {
        seed,
        jet: vector(&v),
        deviation,
        bound,
        verdict: probe_verdict.as_str().into(),
        pass: deviation < LIFTING_TOL && probe_verdict == *verdict,
    })
}
