//! The eight end-to-end acceptance criteria, runnable from `corpus run` and
//! from the `acceptance` test target.

use std::f64::consts::PI;

use pfext::extension::{cocycle_with_initial_jet, path_cocycle, relation_check};
use pfext::linalg::{self, CMatrix, CVector};
use pfext::monodromy::profile_loops;
use pfext::{
    analyze_extension, cocycle_by_continuation, companion_system, is_coboundary, monodromy_representation,
    parse_operator_as, parse_rational_as, shift_by_coboundary, singularities, transfer, BasePoint, Cocycle,
    Complex64, CompanionSystem64, ContinuationConfig, InhomogeneousProblem, MonodromyRepresentation64,
    PathPolyline64, Tolerances, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{self, Outcome};
use crate::exit::Failure;
use crate::oracle::{abel_wronskian, contour_integral};
use crate::pipeline::{random_jet, Options};
use crate::problem::{Overrides, ProblemFile};
use crate::report::{from_c, from_matrix, ExtensionSection, MonodromySection};

pub const LOG_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-7;
pub const NILPOTENT_TOL: f64 = 1e-7;
pub const RELATION_TOL: f64 = 1e-8;
pub const IDENTITY_SLACK: f64 = 10.0;
pub const COCYCLE_INSTANCES: usize = 20;
pub const LIFTING_INSTANCES: usize = 10;
pub const LIFTING_TOL: f64 = 1e-8;
pub const COBOUNDARY_INSTANCES: usize = 10;
pub const COBOUNDARY_RESIDUAL: f64 = 1e-10;
pub const REVERSAL_TOL: f64 = 1e-9;
pub const WRONSKIAN_TOL: f64 = 1e-8;

pub const DEFAULT_SEED: u64 = 20;

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("{status} [{}] {}: {}", self.id, self.name, self.detail)
    }
}

type Check = Result<(bool, String), Failure>;

fn criterion(id: usize, name: &'static str, check: Check) -> Criterion {
    let (pass, detail) = check.unwrap_or_else(|f| (false, format!("error: {f}")));
    Criterion { id, name, pass, detail }
}

/// Runs the corpus once and evaluates every criterion against it.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    let outcomes = corpus::run(&corpus::problems(), &Overrides::default(), Options::default());
    evaluate(&outcomes, seed)
}

pub fn evaluate(outcomes: &[Outcome], seed: u64) -> Vec<Criterion> {
    vec![
        criterion(1, "log extension", log_extension(outcomes)),
        criterion(2, "route agreement", route_agreement(outcomes)),
        criterion(3, "Legendre monodromy", legendre_monodromy(outcomes)),
        criterion(4, "cocycle identity", cocycle_identity(seed)),
        criterion(5, "lifting independence", lifting_independence(seed)),
        criterion(6, "triviality oracle", triviality_oracle(outcomes, seed)),
        criterion(7, "continuation integrity", continuation_integrity()),
        criterion(8, "admissibility", admissibility(outcomes)),
    ]
}

fn outcome<'a>(outcomes: &'a [Outcome], name: &str) -> Result<&'a Outcome, Failure> {
    outcomes
        .iter()
        .find(|o| o.problem.name == name)
        .ok_or_else(|| Failure::parse(format!("corpus problem {name} missing")))
}

fn monodromy(o: &Outcome) -> Result<&MonodromySection, Failure> {
    o.report.monodromy.as_ref().ok_or_else(|| stage_missing(o, "monodromy"))
}

fn extension(o: &Outcome) -> Result<&ExtensionSection, Failure> {
    o.report.extension.as_ref().ok_or_else(|| stage_missing(o, "extension"))
}

fn stage_missing(o: &Outcome, stage: &str) -> Failure {
    let why: Vec<String> = o.report.diagnostics.iter().map(|d| d.to_string()).collect();
    Failure::parse(format!("{}: no {stage} section ({})", o.problem.name, why.join("; ")))
}

fn log_extension(outcomes: &[Outcome]) -> Check {
    let o = outcome(outcomes, "log")?;
    let (m, e) = (monodromy(o)?, extension(o)?);
    let vertices: Vec<Complex64> = m.plan.loops[0].vertices.iter().copied().map(from_c).collect();
    let zero = Complex64::new(0.0, 0.0);
    let expect = contour_integral(|t| 1.0 / t, &vertices, &[zero]);
    let cont = (from_c(e.continuation.vectors[0][0]) - expect).norm();
    let block = (from_c(e.block.cocycle.vectors[0][0]) - expect).norm();
    let oracle_gap = (expect - Complex64::new(0.0, 2.0 * PI)).norm();
    let pass = cont < LOG_TOL && block < LOG_TOL && e.class.verdict == Verdict::Nontrivial.as_str();
    Ok((
        pass,
        format!(
            "|a - oracle| = {cont:.2e} (continuation), {block:.2e} (block); oracle - 2πi = {oracle_gap:.1e}; class {}",
            e.class.verdict
        ),
    ))
}

fn route_agreement(outcomes: &[Outcome]) -> Check {
    let mut checked = Vec::new();
    let mut failed = Vec::new();
    for o in outcomes.iter().filter(|o| o.problem.inhomogeneity.is_some()) {
        let e = extension(o)?;
        let a = &e.agreement;
        if !(a.pass && a.class_verdict == Verdict::Trivial.as_str()) {
            failed.push(format!("{} (diff {:.2e} vs error {:.2e}, class {})", o.problem.name, a.max_difference, a.combined_error, a.class_verdict));
        }
        checked.push(o.problem.name.clone());
    }
    if checked.is_empty() {
        return Ok((false, "no corpus problem has an inhomogeneity".into()));
    }
    Ok((
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} problems agree: {}", checked.len(), checked.join(", "))
        } else {
            format!("disagreement on {}", failed.join(", "))
        },
    ))
}

fn generator(m: &MonodromySection, z: Complex64) -> Result<CMatrix<f64>, Failure> {
    m.generators
        .iter()
        .find(|g| (from_c(g.point) - z).norm() < 1e-9)
        .map(|g| from_matrix(&g.matrix))
        .ok_or_else(|| Failure::parse(format!("no generator around {z}")))
}

fn legendre_monodromy(outcomes: &[Outcome]) -> Check {
    let m = monodromy(outcome(outcomes, "legendre")?)?;
    let m0 = generator(m, Complex64::new(0.0, 0.0))?;
    let m1 = generator(m, Complex64::new(1.0, 0.0))?;
    let tr0 = (linalg::trace(&m0) - 2.0).norm();
    let tr1 = (linalg::trace(&m1) - 2.0).norm();
    let nil = &m0 - linalg::identity::<f64>(2);
    let nil = linalg::norm(&(&nil * &nil));
    let relation = m.relation_residual;
    let one = Complex64::new(1.0, 0.0);
    let expected = [(Complex64::new(0.0, 0.0), one), (Complex64::new(1.0, 0.0), one)];
    let mut eig = 0.0f64;
    for (z, lambda) in expected {
        let p = m
            .consistency
            .points
            .iter()
            .find(|p| matches!(p.location, crate::report::Place::Finite(w) if (from_c(w) - z).norm() < 1e-9))
            .ok_or_else(|| Failure::parse(format!("no consistency entry at {z}")))?;
        let got: Vec<Complex64> = p.eigenvalues.iter().copied().map(from_c).collect();
        eig = eig.max(linalg::multiset_distance(&got, &[lambda, lambda]));
    }
    let inf = m
        .consistency
        .points
        .iter()
        .find(|p| matches!(&p.location, crate::report::Place::Named(n) if n == "infinity"))
        .ok_or_else(|| Failure::parse("no consistency entry at infinity"))?;
    let got: Vec<Complex64> = inf.eigenvalues.iter().copied().map(from_c).collect();
    eig = eig.max(linalg::multiset_distance(&got, &[-one, -one]));
    let eig_tol = Tolerances::default().eigenvalue;
    let pass = tr0 < TRACE_TOL && tr1 < TRACE_TOL && nil < NILPOTENT_TOL && relation < RELATION_TOL && eig < eig_tol;
    Ok((
        pass,
        format!(
            "|tr M0 - 2| = {tr0:.1e}, |tr M1 - 2| = {tr1:.1e}, ||(M0-I)^2|| = {nil:.1e}, relation {relation:.1e}, eigenvalues {eig:.1e}"
        ),
    ))
}

/// Random Fuchsian operator of order ≤ 3 built from first-order factors,
/// with a rational inhomogeneity; all special points sit on a half-integer
/// grid and are pairwise distinct.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (String, String) {
    let mut grid: Vec<(i32, i32)> = (-3..=3).flat_map(|a| (-3..=3).map(move |b| (a, b))).collect();
    grid.shuffle(rng);
    let mut pts = grid.into_iter().map(|(a, b)| format!("({a}/2 + {b}/2*i)"));
    let order = rng.random_range(1..=3);
    let factors: Vec<String> = (0..order)
        .map(|_| {
            let s = pts.next().expect("grid is large enough");
            let lambda = rng.random_range(-4..=4);
            format!("((t - {s})*D - {lambda}/5)")
        })
        .collect();
    let mut p = || pts.next().expect("grid is large enough");
    let g = match rng.random_range(0..4) {
        0 => format!("1/(t - {})", p()),
        1 => format!("(t - {})/(t - {})", p(), p()),
        2 => format!("(t - {})*(t - {})", p(), p()),
        _ => format!("(2 + i)/((t - {})*(t - {}))", p(), p()),
    };
    (factors.join("*"), g)
}

fn random_problem(rng: &mut ChaCha8Rng) -> Result<(String, InhomogeneousProblem<f64>), Failure> {
    let (d, g) = random_instance(rng);
    let label = format!("D = {d}, g = {g}");
    let p = InhomogeneousProblem::new(parse_operator_as::<f64>(&d)?, parse_rational_as::<f64>(&g)?, None)?;
    Ok((label, p))
}

fn cocycle_identity(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = ContinuationConfig::default();
    let mut worst_identity = 0.0f64;
    let mut worst_relation = 0.0f64;
    let mut failures = Vec::new();
    for _ in 0..COCYCLE_INSTANCES {
        let (label, problem) = random_problem(&mut rng)?;
        let plan = problem.loop_plan(BasePoint::Auto, &config)?;
        let rep = monodromy_representation(&problem.operator, &plan, &config)?;
        let a = cocycle_by_continuation(&problem, &rep, &config)?;
        let k = rep.generator_count();
        let (i, j) = (rng.random_range(0..k), rng.random_range(0..k));
        let path = plan.loops[i].path.then(&plan.loops[j].path)?;
        let (_, shift, err) = path_cocycle(&problem, &path, &plan, &config)?;
        let expected = &a.vectors[j] + &rep.matrices[j] * &a.vectors[i];
        let bound = err
            + linalg::norm(&rep.matrices[j]) * a.errors[i]
            + a.errors[j]
            + rep.errors[j] * linalg::vnorm(&a.vectors[i]);
        let gap = linalg::vnorm(&(shift - expected));
        worst_identity = worst_identity.max(gap / bound);
        let relation = relation_check(&problem, &rep, &a, &config)?;
        worst_relation = worst_relation.max(relation.residual / relation.bound.max(f64::MIN_POSITIVE));
        if gap >= IDENTITY_SLACK * bound || relation.residual >= IDENTITY_SLACK * relation.bound {
            failures.push(format!("{label} (pair {i},{j}: {gap:.1e} vs {bound:.1e})"));
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "{COCYCLE_INSTANCES} instances; worst identity gap {worst_identity:.1e} x bound, worst relation {worst_relation:.1e} x bound{}",
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join("; ")) }
        ),
    ))
}

struct Prepared {
    name: String,
    problem: InhomogeneousProblem<f64>,
    rep: MonodromyRepresentation64,
    cocycle: Cocycle<f64>,
    verdict: Verdict,
}

fn prepare(p: &ProblemFile) -> Result<Prepared, Failure> {
    let g = p.parse_inhomogeneity()?.ok_or_else(|| Failure::parse("no inhomogeneity"))?;
    let problem = InhomogeneousProblem::new(p.parse_operator()?, g, p.twist)?;
    let a = analyze_extension(&problem, p.parse_base_point()?, &p.config(), &p.tolerances())?;
    Ok(Prepared {
        name: p.name.clone(),
        problem,
        rep: a.representation,
        cocycle: a.continuation,
        verdict: a.class.verdict,
    })
}

fn lifting_independence(seed: u64) -> Check {
    let prepared: Vec<Prepared> = corpus::problems()
        .iter()
        .filter(|p| p.inhomogeneity.is_some())
        .map(prepare)
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let config = ContinuationConfig::default();
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut changed = Vec::new();
    for k in 0..LIFTING_INSTANCES {
        let p = &prepared[k % prepared.len()];
        let v = random_jet(&mut rng, p.problem.order());
        let recomputed = cocycle_with_initial_jet(&p.problem, &p.rep, &v, &config)?;
        let shifted = shift_by_coboundary(&p.rep, &p.cocycle, &v)?;
        worst = worst.max(recomputed.max_distance(&shifted).0);
        let verdict = is_coboundary(&p.rep, &recomputed, &tol)?.verdict;
        if verdict != p.verdict {
            changed.push(format!("{}: {} -> {}", p.name, p.verdict.as_str(), verdict.as_str()));
        }
    }
    Ok((
        worst < LIFTING_TOL && changed.is_empty(),
        format!(
            "{LIFTING_INSTANCES} jets over {} problems; worst deviation {worst:.1e}; verdict changes: {}",
            prepared.len(),
            if changed.is_empty() { "none".into() } else { changed.join(", ") }
        ),
    ))
}

fn stacked(rep: &MonodromyRepresentation64) -> CMatrix<f64> {
    let n = rep.dim;
    let mut s = CMatrix::<f64>::zeros(n * rep.generator_count(), n);
    for (i, m) in rep.matrices.iter().enumerate() {
        s.view_mut((i * n, 0), (n, n)).copy_from(&(m - linalg::identity::<f64>(n)));
    }
    s
}

fn triviality_oracle(outcomes: &[Outcome], seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let config = ContinuationConfig::default();
    let tol = Tolerances::default();
    let mut reps: Vec<(String, MonodromyRepresentation64)> = Vec::new();
    for name in ["legendre", "euler_third", "hypergeometric", "log"] {
        reps.push((name.into(), crate::compare::representation(monodromy(outcome(outcomes, name)?)?)?));
    }
    while reps.len() < 6 {
        let (label, problem) = random_problem(&mut rng)?;
        let plan = problem.loop_plan(BasePoint::Auto, &config)?;
        reps.push((label, monodromy_representation(&problem.operator, &plan, &config)?));
    }
    let mut worst_residual = 0.0f64;
    let mut worst_kernel = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..COBOUNDARY_INSTANCES {
        let (name, rep) = &reps[k % reps.len()];
        let c = random_jet(&mut rng, rep.dim) * Complex64::new(rng.random_range(0.5..4.0), 0.0);
        let a = Cocycle {
            vectors: rep.matrices.iter().map(|m| m * &c - &c).collect(),
            errors: vec![0.0; rep.generator_count()],
            scale: 0.0,
        };
        let r = is_coboundary(rep, &a, &tol)?;
        // the witness may differ from c only by a common fixed vector
        let diff: CVector<f64> = &r.witness - &c;
        let kernel = linalg::null_space(&stacked(rep), tol.rank);
        let projected = kernel.iter().fold(diff.clone(), |acc, n| &acc - n * n.dotc(&diff));
        let off_kernel = linalg::vnorm(&projected) / linalg::vnorm(&c);
        worst_residual = worst_residual.max(r.residual);
        worst_kernel = worst_kernel.max(off_kernel);
        if r.verdict != Verdict::Trivial || r.residual >= COBOUNDARY_RESIDUAL || off_kernel >= 1e-8 {
            failures.push(format!("{name}: {} residual {:.1e}, off-kernel {off_kernel:.1e}", r.verdict.as_str(), r.residual));
        }
    }
    let log = prepare(&outcome(outcomes, "log")?.problem)?;
    let log_verdict = is_coboundary(&log.rep, &log.cocycle, &tol)?.verdict;
    Ok((
        failures.is_empty() && log_verdict == Verdict::Nontrivial,
        format!(
            "{COBOUNDARY_INSTANCES} coboundaries; worst residual {worst_residual:.1e}, witness off-kernel {worst_kernel:.1e}; log cocycle {}{}",
            log_verdict.as_str(),
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join("; ")) }
        ),
    ))
}

struct CorpusPaths {
    name: String,
    operator: pfext::Operator64,
    system: CompanionSystem64,
    config: ContinuationConfig,
    paths: Vec<PathPolyline64>,
}

/// Paths and systems of every Fuchsian corpus problem.
fn corpus_paths() -> Result<Vec<CorpusPaths>, Failure> {
    let mut out = Vec::new();
    for p in corpus::problems() {
        let d = p.parse_operator()?;
        let profile = singularities(&d)?;
        if !profile.points.iter().all(|x| x.is_regular()) {
            continue;
        }
        let config = p.config();
        let (plan, system) = match p.parse_inhomogeneity()? {
            Some(g) => {
                let problem = InhomogeneousProblem::new(d.clone(), g, None)?;
                (problem.loop_plan(p.parse_base_point()?, &config)?, problem.system()?)
            }
            None => (profile_loops(&profile, p.parse_base_point()?, &config)?, companion_system(&d, None)?),
        };
        let mut paths: Vec<PathPolyline64> = plan.loops.iter().map(|l| l.path.clone()).collect();
        paths.extend(plan.infinity_loop.clone());
        let cfg = ContinuationConfig {
            clearance: Some(plan.clearance),
            ..config
        };
        out.push(CorpusPaths {
            name: p.name.clone(),
            operator: d,
            system,
            config: cfg,
            paths,
        });
    }
    Ok(out)
}

fn continuation_integrity() -> Check {
    let mut worst_reversal = 0.0f64;
    let mut worst_refinement = 0.0f64;
    let mut worst_wronskian = 0.0f64;
    let mut count = 0;
    let mut failures = Vec::new();
    for CorpusPaths {
        name,
        operator: d,
        system,
        config: cfg,
        paths,
    } in corpus_paths()?
    {
        for (k, path) in paths.iter().enumerate() {
            let t = transfer(&system, path, &cfg)?;
            let r = transfer(&system, &path.reversed(), &cfg)?;
            let fine = transfer(&system, path, &cfg.with_subdivision(2))?;
            let prod = r.augmented() * t.augmented();
            let reversal = linalg::distance(&prod, &linalg::identity::<f64>(prod.nrows()));
            let refinement = linalg::distance(&fine.augmented(), &t.augmented());
            let abel = abel_wronskian(&d, path.vertices())?;
            let wronskian = (linalg::determinant(&t.matrix) - abel).norm() / abel.norm();
            worst_reversal = worst_reversal.max(reversal);
            worst_refinement = worst_refinement.max(refinement / t.error_estimate.max(f64::MIN_POSITIVE));
            worst_wronskian = worst_wronskian.max(wronskian);
            if reversal >= REVERSAL_TOL || refinement > t.error_estimate || wronskian >= WRONSKIAN_TOL {
                failures.push(format!("{name} path {k}"));
            }
            count += 1;
        }
    }
    Ok((
        failures.is_empty() && count > 0,
        format!(
            "{count} corpus paths; reversal {worst_reversal:.1e}, refinement {worst_refinement:.1e} x estimate, Wronskian {worst_wronskian:.1e}{}",
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    ))
}

fn admissibility(outcomes: &[Outcome]) -> Check {
    let legendre = &monodromy(outcome(outcomes, "legendre")?)?.admissibility;
    let euler = &monodromy(outcome(outcomes, "euler_half")?)?.admissibility;
    let at_01 = legendre.unipotent.len() == 2;
    let pass = at_01
        && legendre.unipotent_pass
        && legendre.irreducible == Some(true)
        && legendre.irreducible_heuristic
        && !euler.unipotent_pass;
    let norms: Vec<String> = legendre.unipotent.iter().map(|u| format!("{:.1e}", u.norm)).collect();
    Ok((
        pass,
        format!(
            "Legendre ||(M-I)^2|| at 0, 1 = [{}], irreducible {:?} (heuristic); Euler 1/2 unipotent: {} ({:.2})",
            norms.join(", "),
            legendre.irreducible,
            euler.unipotent_pass,
            euler.unipotent.first().map_or(f64::NAN, |u| u.norm)
        ),
    ))
}
