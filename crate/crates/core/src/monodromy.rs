//! Generator loops around punctures and the monodromy representation.

use std::f64::consts::PI;

use num_complex::Complex;
use rayon::prelude::*;

use crate::config::{ContinuationConfig, Tolerances};
use crate::continuation::{companion_system, segment_distance, transfer, PathPolyline};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::roots::{cluster_points, cluster_tol, eigenvalues};
use crate::scalar::{abs, exp_2pi_i, from_c64, to_c64, Real};
use crate::singular::{default_clearance, fuchsian_check, singularities, Location, Operator, SingularityProfile};

/// Orientation, ordering and action conventions shared by every report.
pub const LOOP_CONVENTION: &str =
    "loops counterclockwise; ordered by arg(s - t0) starting after the largest angular gap, ties nearest first";
pub const ACTION_CONVENTION: &str = "jet coordinates v -> M v; gamma then delta => M_delta M_gamma";

const POLYGON_SIDES: usize = 16;
const INFINITY_SIDES: usize = 32;
const GRID: usize = 21;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasePoint<T: Real> {
    Auto,
    At(Complex<T>),
}

#[derive(Clone, Debug)]
pub struct GeneratorLoop<T: Real> {
    pub point: Complex<T>,
    pub radius: f64,
    pub path: PathPolyline<T>,
}

#[derive(Clone, Debug)]
pub struct LoopPlan<T: Real> {
    pub base: Complex<T>,
    pub clearance: f64,
    /// One loop per puncture in composition order.
    pub loops: Vec<GeneratorLoop<T>>,
    /// Clockwise loop enclosing every puncture, homotopic to the inverse of
    /// the ordered product of the generators. `None` without punctures.
    pub infinity_loop: Option<PathPolyline<T>>,
    pub convention: &'static str,
}

impl<T: Real> LoopPlan<T> {
    pub fn index_of(&self, z: Complex<T>) -> Option<usize> {
        let tol = cluster_tol::<T>() * abs(z).max(1.0);
        self.loops.iter().position(|l| abs(l.point - z) <= tol)
    }
}

fn dedupe<T: Real>(points: &[Complex<T>]) -> Vec<Complex<T>> {
    cluster_points(points, cluster_tol::<T>())
        .into_iter()
        .map(|c| c.center)
        .collect()
}

fn arg(z: Complex<f64>) -> f64 {
    z.im.atan2(z.re).rem_euclid(2.0 * PI)
}

/// Middle of the largest angular gap between the directions from `base` to
/// the points, and the smallest gap.
fn gap_direction(base: Complex<f64>, points: &[Complex<f64>]) -> (f64, f64) {
    let mut args: Vec<f64> = points.iter().map(|p| arg(*p - base)).collect();
    args.sort_by(f64::total_cmp);
    if args.len() == 1 {
        return ((args[0] + PI).rem_euclid(2.0 * PI), 2.0 * PI);
    }
    let mut best = (0.0, -1.0);
    let mut smallest = f64::INFINITY;
    for i in 0..args.len() {
        let a = args[i];
        let b = if i + 1 < args.len() { args[i + 1] } else { args[0] + 2.0 * PI };
        let gap = b - a;
        smallest = smallest.min(gap);
        if gap > best.1 + 1e-12 {
            best = ((a + gap / 2.0).rem_euclid(2.0 * PI), gap);
        }
    }
    (best.0, smallest)
}

/// Interior waypoints that route the segment `a → b` around every point
/// closer than `clearance`, keeping each point on the side the straight
/// segment would have left it.
fn route(a: Complex<f64>, b: Complex<f64>, points: &[Complex<f64>], clearance: f64, depth: usize) -> Result<Vec<Complex<f64>>> {
    let d = b - a;
    let len = d.norm();
    let blocking = points
        .iter()
        .filter(|p| segment_distance(a, b, **p) < clearance)
        .min_by(|p, q| {
            let sp = ((**p - a) * d.conj()).re;
            let sq = ((**q - a) * d.conj()).re;
            sp.total_cmp(&sq)
        });
    let Some(&p) = blocking else {
        return Ok(Vec::new());
    };
    let too_close = || Error::PathTooCloseToSingularity {
        point: format!("{p}"),
        distance: segment_distance(a, b, p),
        clearance,
    };
    if depth == 0 || len == 0.0 {
        return Err(too_close());
    }
    let s = (((p - a) * d.conj()).re / (len * len)).clamp(0.0, 1.0);
    let foot = a + d * s;
    let off = foot - p;
    let normal = if off.norm() > 1e-9 * len {
        off / off.norm()
    } else {
        Complex::new(0.0, 1.0) * d / len
    };
    for factor in [3.0, 2.0, 1.5] {
        let w = p + normal * (factor * clearance);
        if points.iter().any(|q| (*q - w).norm() < clearance) {
            continue;
        }
        let (Ok(mut first), Ok(second)) = (route(a, w, points, clearance, depth - 1), route(w, b, points, clearance, depth - 1)) else {
            continue;
        };
        first.push(w);
        first.extend(second);
        return Ok(first);
    }
    Err(too_close())
}

fn validate_base<T: Real>(base: Complex<T>, points: &[Complex<T>], clearance: f64) -> Result<()> {
    for p in points {
        let d = abs(base - *p);
        if d <= cluster_tol::<T>() * abs(*p).max(1.0) {
            return Err(Error::NoValidBasepoint(format!("{} is a singular point", to_c64(base))));
        }
        if d < clearance {
            return Err(Error::PathTooCloseToSingularity {
                point: format!("{}", to_c64(*p)),
                distance: d,
                clearance,
            });
        }
    }
    Ok(())
}

fn plan_at<T: Real>(base: Complex<T>, points: &[Complex<T>], clearance: f64) -> Result<LoopPlan<T>> {
    validate_base(base, points, clearance)?;
    let b = to_c64(base);
    let pts: Vec<Complex<f64>> = points.iter().map(|p| to_c64(*p)).collect();
    if pts.is_empty() {
        return Ok(LoopPlan {
            base,
            clearance,
            loops: Vec::new(),
            infinity_loop: None,
            convention: LOOP_CONVENTION,
        });
    }
    let (start, _) = gap_direction(b, &pts);
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let key = |i: usize| ((arg(pts[i] - b) - start).rem_euclid(2.0 * PI), (pts[i] - b).norm());
    order.sort_by(|&i, &j| {
        let (ai, di) = key(i);
        let (aj, dj) = key(j);
        if (ai - aj).abs() <= 1e-12 {
            di.total_cmp(&dj)
        } else {
            ai.total_cmp(&aj)
        }
    });
    let mut loops = Vec::with_capacity(pts.len());
    for &i in &order {
        let s = pts[i];
        let nearest = pts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| (*q - s).norm())
            .fold(f64::INFINITY, f64::min);
        let dist = (b - s).norm();
        let radius = 0.5 * nearest.min(dist);
        if radius * (PI / POLYGON_SIDES as f64).cos() < clearance {
            return Err(Error::PathTooCloseToSingularity {
                point: format!("{s}"),
                distance: radius * (PI / POLYGON_SIDES as f64).cos(),
                clearance,
            });
        }
        let u = (b - s) / dist;
        let ring: Vec<Complex<f64>> = (0..=POLYGON_SIDES)
            .map(|k| s + u * radius * Complex::from_polar(1.0, 2.0 * PI * (k % POLYGON_SIDES) as f64 / POLYGON_SIDES as f64))
            .collect();
        let spoke = route(b, ring[0], &pts, clearance, 6)?;
        let mut vertices = vec![b];
        vertices.extend(spoke.iter().copied());
        vertices.extend(ring.iter().copied());
        vertices.extend(spoke.iter().rev().copied());
        vertices.push(b);
        let mut vertices: Vec<Complex<T>> = vertices.into_iter().map(from_c64).collect();
        vertices[0] = base;
        *vertices.last_mut().expect("nonempty") = base;
        loops.push(GeneratorLoop {
            point: points[i],
            radius,
            path: PathPolyline::new(vertices)?,
        });
    }
    let far = pts.iter().map(|p| (*p - b).norm()).fold(0.0, f64::max);
    let big = 1.5 * far + 4.0 * clearance;
    let ring: Vec<Complex<f64>> = (0..=INFINITY_SIDES)
        .map(|k| b + Complex::from_polar(big, start - 2.0 * PI * (k % INFINITY_SIDES) as f64 / INFINITY_SIDES as f64))
        .collect();
    let spoke = route(b, ring[0], &pts, clearance, 6)?;
    let mut vertices = vec![b];
    vertices.extend(spoke.iter().copied());
    vertices.extend(ring.iter().copied());
    vertices.extend(spoke.iter().rev().copied());
    vertices.push(b);
    let mut vertices: Vec<Complex<T>> = vertices.into_iter().map(from_c64).collect();
    vertices[0] = base;
    *vertices.last_mut().expect("nonempty") = base;
    Ok(LoopPlan {
        base,
        clearance,
        loops,
        infinity_loop: Some(PathPolyline::new(vertices)?),
        convention: LOOP_CONVENTION,
    })
}

/// Candidate base points on a grid over the bounding box of `points`, best
/// first: largest distance to the nearest point, then widest smallest
/// angular gap between spokes.
fn base_candidates(points: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let pad = 0.5 * crate::singular::separation(points).unwrap_or(2.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let mut scored = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let z = Complex::new(
                x0 + (x1 - x0) * i as f64 / (GRID - 1) as f64,
                y0 + (y1 - y0) * j as f64 / (GRID - 1) as f64,
            );
            let nearest = points.iter().map(|p| (*p - z).norm()).fold(f64::INFINITY, f64::min);
            if nearest == 0.0 {
                continue;
            }
            let (_, gap) = gap_direction(z, points);
            scored.push((z, nearest, gap));
        }
    }
    scored.sort_by(|a, b| {
        let scale = a.1.max(b.1);
        if (a.1 - b.1).abs() <= 1e-9 * scale {
            b.2.total_cmp(&a.2)
        } else {
            b.1.total_cmp(&a.1)
        }
    });
    scored.into_iter().map(|s| s.0).collect()
}

/// Plans one counterclockwise loop per puncture from `base`. With
/// `BasePoint::Auto` the base point is chosen on a grid around the punctures;
/// without punctures it is `0`.
pub fn generator_loops<T: Real>(points: &[Complex<T>], base: BasePoint<T>, clearance: Option<f64>) -> Result<LoopPlan<T>> {
    let points = dedupe(points);
    let clearance = clearance.unwrap_or_else(|| default_clearance(&points));
    if !(clearance > 0.0 && clearance.is_finite()) {
        return Err(Error::InvalidPath(format!("clearance must be positive, got {clearance}")));
    }
    match base {
        BasePoint::At(z) => plan_at(z, &points, clearance),
        BasePoint::Auto if points.is_empty() => plan_at(Complex::new(T::zero(), T::zero()), &points, clearance),
        BasePoint::Auto => {
            let pts: Vec<Complex<f64>> = points.iter().map(|p| to_c64(*p)).collect();
            let mut last = None;
            for z in base_candidates(&pts).into_iter().take(24) {
                match plan_at(from_c64(z), &points, clearance) {
                    Ok(plan) => return Ok(plan),
                    Err(e) => last = Some(e),
                }
            }
            // when every candidate fails on clearance, the clearance is the problem
            match last {
                Some(e @ Error::PathTooCloseToSingularity { .. }) => Err(e),
                Some(e) => Err(Error::NoValidBasepoint(format!("no grid candidate admits a loop plan ({e})"))),
                None => Err(Error::NoValidBasepoint("no grid candidate".into())),
            }
        }
    }
}

/// Loop plan for the finite singular points of a profile.
pub fn profile_loops<T: Real>(profile: &SingularityProfile<T>, base: BasePoint<T>, config: &ContinuationConfig) -> Result<LoopPlan<T>> {
    generator_loops(&profile.finite_points(), base, config.clearance)
}

#[derive(Clone, Debug)]
pub struct MonodromyRepresentation<T: Real> {
    pub plan: LoopPlan<T>,
    pub dim: usize,
    /// `M_γ` for each generator, in plan order.
    pub matrices: Vec<CMatrix<T>>,
    pub errors: Vec<f64>,
    /// `(M_k ⋯ M_1)^{-1}`.
    pub infinity: CMatrix<T>,
    pub infinity_error: f64,
    pub convention: &'static str,
}

impl<T: Real> MonodromyRepresentation<T> {
    pub fn generator_count(&self) -> usize {
        self.matrices.len()
    }

    /// Matrix of the word that traverses the generators `word[0]`, `word[1]`, … in turn.
    pub fn word(&self, word: &[usize]) -> CMatrix<T> {
        word.iter()
            .fold(linalg::identity(self.dim), |acc, &i| &self.matrices[i] * acc)
    }

    /// `M_k ⋯ M_1`.
    pub fn product(&self) -> CMatrix<T> {
        let all: Vec<usize> = (0..self.matrices.len()).collect();
        self.word(&all)
    }

    /// `‖M_∞ · M_k ⋯ M_1 − I‖`.
    pub fn relation_residual(&self) -> f64 {
        linalg::distance(&(&self.infinity * self.product()), &linalg::identity(self.dim))
    }

    /// Monodromy around a location: a generator, or `M_∞`.
    pub fn matrix_at(&self, location: &Location<T>) -> Option<&CMatrix<T>> {
        match location {
            Location::Infinity => Some(&self.infinity),
            Location::Finite(z) => self.plan.index_of(*z).map(|i| &self.matrices[i]),
        }
    }
}

pub(crate) fn loop_config(config: &ContinuationConfig, plan: &LoopPlan<impl Real>) -> ContinuationConfig {
    ContinuationConfig {
        clearance: Some(plan.clearance),
        ..config.clone()
    }
}

/// Monodromy of `D` along every loop of `plan`, in the unit-jet basis at the
/// base point.
pub fn monodromy_representation<T: Real>(
    d: &Operator<T>,
    plan: &LoopPlan<T>,
    config: &ContinuationConfig,
) -> Result<MonodromyRepresentation<T>> {
    let report = fuchsian_check(d)?;
    if !report.fuchsian {
        return Err(Error::NonFuchsian {
            points: report
                .per_point
                .iter()
                .filter(|(_, ok)| !ok)
                .map(|(l, _)| l.to_string())
                .collect(),
        });
    }
    let system = companion_system(d, None)?;
    let cfg = loop_config(config, plan);
    let results: Vec<Result<_>> = plan
        .loops
        .par_iter()
        .map(|l| transfer(&system, &l.path, &cfg))
        .collect();
    let mut matrices = Vec::with_capacity(results.len());
    let mut errors = Vec::with_capacity(results.len());
    for r in results {
        let r = r?;
        matrices.push(r.matrix);
        errors.push(r.error_estimate);
    }
    let n = d.order();
    let mut rep = MonodromyRepresentation {
        plan: plan.clone(),
        dim: n,
        matrices,
        errors,
        infinity: linalg::identity(n),
        infinity_error: 0.0,
        convention: ACTION_CONVENTION,
    };
    let product = rep.product();
    let inverse = linalg::inverse(&product).ok_or_else(|| Error::PrecisionExhausted {
        target: config.precision_target,
        order: config.max_order,
        near: "product of generators".into(),
    })?;
    let product_error: f64 = rep
        .matrices
        .iter()
        .zip(&rep.errors)
        .map(|(m, e)| e * linalg::norm(&product) / linalg::norm(m).max(1e-300))
        .sum();
    rep.infinity_error = product_error * linalg::norm(&inverse).powi(2);
    rep.infinity = inverse;
    Ok(rep)
}

/// Profile, plan and representation in one call, with loops around the
/// finite singular points of `D`.
pub fn analyze_monodromy<T: Real>(
    d: &Operator<T>,
    base: BasePoint<T>,
    config: &ContinuationConfig,
) -> Result<(SingularityProfile<T>, MonodromyRepresentation<T>)> {
    let profile = singularities(d)?;
    let plan = profile_loops(&profile, base, config)?;
    let rep = monodromy_representation(d, &plan, config)?;
    Ok((profile, rep))
}

#[derive(Clone, Debug)]
pub struct PointConsistency<T: Real> {
    pub location: Location<T>,
    pub eigenvalues: Vec<Complex<T>>,
    /// `exp(2πiρ)` for the local exponents `ρ`.
    pub expected: Vec<Complex<T>>,
    pub distance: f64,
    pub determinant: Complex<T>,
    pub expected_determinant: Complex<T>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport<T: Real> {
    pub points: Vec<PointConsistency<T>>,
    pub tolerance: f64,
    pub pass: bool,
}

fn point_consistency<T: Real>(
    location: Location<T>,
    m: &CMatrix<T>,
    exponents: &[Complex<T>],
    tol: f64,
) -> Result<PointConsistency<T>> {
    let eig = eigenvalues(m)?;
    let expected: Vec<Complex<T>> = exponents.iter().map(|r| exp_2pi_i(*r)).collect();
    let distance = linalg::multiset_distance(&eig, &expected);
    let determinant = linalg::determinant(m);
    let sum = exponents.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + *b);
    let expected_determinant = exp_2pi_i(sum);
    let det_ok = abs(determinant - expected_determinant) <= tol;
    Ok(PointConsistency {
        location,
        eigenvalues: eig,
        expected,
        distance,
        determinant,
        expected_determinant,
        pass: distance <= tol && det_ok,
    })
}

/// Compares monodromy eigenvalues and determinants with the local exponents.
/// Punctures where `D` is regular are checked against the ordinary
/// exponents `0, …, n−1`.
pub fn local_consistency_check<T: Real>(
    rep: &MonodromyRepresentation<T>,
    profile: &SingularityProfile<T>,
    tol: &Tolerances,
) -> Result<ConsistencyReport<T>> {
    let ordinary: Vec<Complex<T>> = (0..rep.dim).map(|k| Complex::new(T::of(k as f64), T::zero())).collect();
    let mut points = Vec::with_capacity(rep.matrices.len() + 1);
    for (l, m) in rep.plan.loops.iter().zip(&rep.matrices) {
        let exps = match profile.point_at(l.point) {
            Some(p) => p.exponents.clone(),
            None => ordinary.clone(),
        };
        points.push(point_consistency(Location::Finite(l.point), m, &exps, tol.eigenvalue)?);
    }
    let inf = profile.infinity();
    if inf.is_regular() {
        points.push(point_consistency(Location::Infinity, &rep.infinity, &inf.exponents, tol.eigenvalue)?);
    }
    let pass = points.iter().all(|p| p.pass);
    Ok(ConsistencyReport {
        points,
        tolerance: tol.eigenvalue,
        pass,
    })
}

#[derive(Clone, Debug)]
pub struct UnipotencyEntry<T: Real> {
    pub location: Location<T>,
    /// `‖(M − I)^n‖`.
    pub norm: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct AdmissibilityReport<T: Real> {
    pub unipotent: Vec<UnipotencyEntry<T>>,
    pub unipotent_pass: bool,
    /// `None` when the dimension exceeds 4.
    pub irreducible: Option<bool>,
    /// The irreducibility verdict is numerical, not a proof.
    pub irreducible_heuristic: bool,
    /// Dimension of the matrix algebra generated by the monodromy.
    pub algebra_dimension: usize,
    /// Smallest residual of a candidate common eigenvector.
    pub common_eigenvector_residual: f64,
    pub pass: bool,
}

/// Dimension of the algebra spanned by all words in `gens`, by closure under
/// multiplication with singular-value rank decisions.
fn algebra_dimension<T: Real>(gens: &[CMatrix<T>], n: usize, tol: f64) -> usize {
    let target = n * n;
    let mut basis: Vec<CMatrix<T>> = vec![linalg::identity(n)];
    let mut frontier = basis.clone();
    let rank_of = |mats: &[CMatrix<T>]| -> usize {
        let mut stacked = CMatrix::<T>::zeros(target, mats.len());
        for (j, m) in mats.iter().enumerate() {
            let scale = T::of(linalg::norm(m).max(1e-300));
            for (i, z) in m.iter().enumerate() {
                stacked[(i, j)] = *z / scale;
            }
        }
        let sv = stacked.singular_values();
        let smax = sv.iter().map(|s| s.to_f64().unwrap_or(0.0)).fold(0.0, f64::max);
        sv.iter().filter(|s| s.to_f64().unwrap_or(0.0) > tol * smax).count()
    };
    while !frontier.is_empty() && basis.len() < target {
        let mut next = Vec::new();
        for f in &frontier {
            for g in gens {
                let cand = g * f;
                let mut trial = basis.clone();
                trial.push(cand.clone());
                if rank_of(&trial) > basis.len() {
                    basis.push(cand.clone());
                    next.push(cand);
                    if basis.len() == target {
                        return target;
                    }
                }
            }
        }
        frontier = next;
    }
    basis.len()
}

/// Smallest residual `max_j ‖M_j v − (v*M_j v) v‖` over eigenvectors `v` of
/// the generators.
fn common_eigenvector_residual<T: Real>(gens: &[CMatrix<T>], n: usize) -> f64 {
    let mut best = f64::INFINITY;
    for m in gens {
        let Ok(eig) = eigenvalues(m) else { continue };
        for lambda in eig {
            let shifted = m - CMatrix::<T>::identity(n, n) * lambda;
            let svd = shifted.svd(false, true);
            let v_t = svd.v_t.expect("requested");
            let (k, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
                .expect("n ≥ 1");
            let v = v_t.row(k).adjoint();
            let worst = gens
                .iter()
                .map(|g| {
                    let gv = g * &v;
                    let mu = v.dotc(&gv);
                    linalg::vnorm(&(gv - &v * mu)) / linalg::norm(g).max(1e-300)
                })
                .fold(0.0, f64::max);
            best = best.min(worst);
        }
    }
    best
}

/// Unipotency of the monodromy at each boundary point and, for dimension at
/// most 4, irreducibility of the whole representation.
pub fn admissibility_check<T: Real>(
    rep: &MonodromyRepresentation<T>,
    boundary: &[Location<T>],
    tol: &Tolerances,
) -> Result<AdmissibilityReport<T>> {
    let n = rep.dim;
    let mut unipotent = Vec::with_capacity(boundary.len());
    for loc in boundary {
        let m = rep.matrix_at(loc).ok_or_else(|| {
            Error::InvalidPath(format!("{loc} is not a puncture of the loop plan"))
        })?;
        let nil = m - linalg::identity::<T>(n);
        let power = (1..n).fold(nil.clone(), |acc, _| &acc * &nil);
        let norm = linalg::norm(&power);
        unipotent.push(UnipotencyEntry {
            location: *loc,
            norm,
            pass: norm < tol.unipotent,
        });
    }
    let unipotent_pass = unipotent.iter().all(|u| u.pass);
    let mut gens = rep.matrices.clone();
    if gens.is_empty() {
        gens.push(linalg::identity(n));
    }
    let algebra = algebra_dimension(&gens, n, tol.irreducible);
    let residual = if n == 1 { f64::INFINITY } else { common_eigenvector_residual(&gens, n) };
    let irreducible = (n <= 4).then_some(algebra == n * n);
    Ok(AdmissibilityReport {
        unipotent,
        unipotent_pass,
        irreducible,
        irreducible_heuristic: true,
        algebra_dimension: algebra,
        common_eigenvector_residual: residual,
        pass: unipotent_pass && irreducible.unwrap_or(false),
    })
}

#[derive(Clone, Debug)]
pub struct InfinityCheck<T: Real> {
    /// Eigenvalues of the monodromy of the pulled-back operator around `s = 0`.
    pub direct: Vec<Complex<T>>,
    /// Eigenvalues of `M_∞` from the product relation.
    pub from_product: Vec<Complex<T>>,
    pub distance: f64,
    pub pass: bool,
}

/// Continues the operator pulled back to `s = 1/t` around `s = 0` and compares
/// eigenvalues with `M_∞`.
pub fn infinity_direct_check<T: Real>(
    d: &Operator<T>,
    rep: &MonodromyRepresentation<T>,
    config: &ContinuationConfig,
    tol: &Tolerances,
) -> Result<InfinityCheck<T>> {
    let pulled = d.pullback_to_infinity()?;
    let system = companion_system(&pulled, None)?;
    let zero_tol = cluster_tol::<T>();
    let others = system
        .poles()
        .iter()
        .map(|p| abs(*p))
        .filter(|r| *r > zero_tol)
        .fold(f64::INFINITY, f64::min);
    let radius = if others.is_finite() { 0.5 * others } else { 1.0 };
    let mut vertices: Vec<Complex<T>> = (0..INFINITY_SIDES)
        .map(|k| from_c64(Complex::from_polar(radius, 2.0 * PI * k as f64 / INFINITY_SIDES as f64)))
        .collect();
    vertices.push(vertices[0]);
    let path = PathPolyline::new(vertices)?;
    let cfg = ContinuationConfig {
        clearance: Some(0.5 * radius),
        ..config.clone()
    };
    let t = transfer(&system, &path, &cfg)?;
    let direct = eigenvalues(&t.matrix)?;
    let from_product = eigenvalues(&rep.infinity)?;
    let distance = linalg::multiset_distance(&direct, &from_product);
    Ok(InfinityCheck {
        direct,
        from_product,
        distance,
        pass: distance <= tol.eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_operator;
    use crate::scalar::{cx, Coefficient};

    fn op(src: &str) -> Operator<f64> {
        parse_operator(src).unwrap().map(Complex::<f64>::from_exact)
    }

    #[test]
    fn single_puncture_plan() {
        let plan = generator_loops(&[cx::<f64>(0.0, 0.0)], BasePoint::At(cx(1.0, 0.0)), None).unwrap();
        assert_eq!(plan.loops.len(), 1);
        assert!(plan.loops[0].path.is_closed());
        assert!((plan.loops[0].radius - 0.5).abs() < 1e-15);
        assert!(plan.infinity_loop.is_some());
    }

    #[test]
    fn two_punctures_ordered_by_argument() {
        let pts = [cx::<f64>(0.0, 0.0), cx(1.0, 0.0)];
        let plan = generator_loops(&pts, BasePoint::At(cx(0.5, 1.0)), None).unwrap();
        // both spokes point down; the largest gap is above, so 0 (at 225°) precedes 1 (at 315°)
        assert_eq!(plan.loops[0].point, cx(0.0, 0.0));
        assert_eq!(plan.loops[1].point, cx(1.0, 0.0));
    }

    #[test]
    fn empty_plan() {
        let plan = generator_loops::<f64>(&[], BasePoint::Auto, None).unwrap();
        assert!(plan.loops.is_empty() && plan.infinity_loop.is_none());
        assert_eq!(plan.base, cx(0.0, 0.0));
    }

    #[test]
    fn collinear_punctures_get_detours() {
        let pts = [cx::<f64>(1.0, 0.0), cx(2.0, 0.0), cx(3.0, 0.0)];
        let plan = generator_loops(&pts, BasePoint::At(cx(0.0, 0.0)), None).unwrap();
        let order: Vec<f64> = plan.loops.iter().map(|l| l.point.re).collect();
        assert_eq!(order, vec![1.0, 2.0, 3.0]);
        for l in &plan.loops {
            for p in &pts {
                assert!(l.path.distance_to(*p) >= plan.clearance);
            }
        }
    }

    #[test]
    fn base_point_too_close() {
        let err = generator_loops(&[cx::<f64>(0.0, 0.0), cx(1.0, 0.0)], BasePoint::At(cx(0.05, 0.0)), None).unwrap_err();
        assert!(matches!(err, Error::PathTooCloseToSingularity { .. }));
        let err = generator_loops(&[cx::<f64>(0.0, 0.0)], BasePoint::At(cx(0.0, 0.0)), None).unwrap_err();
        assert!(matches!(err, Error::NoValidBasepoint(_)));
    }

    #[test]
    fn oversized_clearance_is_reported_as_such() {
        let err = generator_loops(&[cx::<f64>(0.0, 0.0), cx(1.0, 0.0)], BasePoint::Auto, Some(5.0)).unwrap_err();
        assert!(matches!(err, Error::PathTooCloseToSingularity { .. }), "{err}");
    }

    #[test]
    fn euler_monodromy() {
        let (_, rep) = analyze_monodromy(&op("t*D - 1/3"), BasePoint::At(cx(1.0, 0.0)), &ContinuationConfig::default()).unwrap();
        let expect = exp_2pi_i(cx::<f64>(1.0 / 3.0, 0.0));
        assert!((rep.matrices[0][(0, 0)] - expect).norm() < 1e-12);
        assert!(rep.relation_residual() < 1e-12);
    }

    #[test]
    fn derivation_has_trivial_monodromy() {
        let (profile, rep) = analyze_monodromy(&op("D"), BasePoint::Auto, &ContinuationConfig::default()).unwrap();
        assert!(profile.finite_points().is_empty());
        assert_eq!(rep.generator_count(), 0);
        assert!(linalg::distance(&rep.infinity, &linalg::identity(1)) == 0.0);
    }

    #[test]
    fn legendre_monodromy_is_unipotent() {
        let d = op("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
        let (profile, rep) = analyze_monodromy(&d, BasePoint::Auto, &ContinuationConfig::default()).unwrap();
        for m in &rep.matrices {
            assert!((linalg::trace(m) - cx(2.0, 0.0)).norm() < 1e-9);
        }
        let tol = Tolerances::default();
        assert!(local_consistency_check(&rep, &profile, &tol).unwrap().pass);
        let boundary = [Location::Finite(cx(0.0, 0.0)), Location::Finite(cx(1.0, 0.0))];
        let adm = admissibility_check(&rep, &boundary, &tol).unwrap();
        assert!(adm.unipotent_pass);
        assert_eq!(adm.irreducible, Some(true));
        let inf = infinity_direct_check(&d, &rep, &ContinuationConfig::default(), &tol).unwrap();
        assert!(inf.pass, "{inf:?}");
    }

    #[test]
    fn corrupted_matrix_fails_consistency() {
        let d = op("t*D - 1/3");
        let (profile, mut rep) = analyze_monodromy(&d, BasePoint::At(cx(1.0, 0.0)), &ContinuationConfig::default()).unwrap();
        rep.matrices[0][(0, 0)] *= cx(1.01, 0.0);
        assert!(!local_consistency_check(&rep, &profile, &Tolerances::default()).unwrap().pass);
    }

    #[test]
    fn commuting_diagonal_generators_are_reducible() {
        let n = 2;
        let diag = |a: f64, b: f64| CMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(vec![cx(a, 0.0), cx(b, 0.0)]));
        let rep = MonodromyRepresentation {
            plan: generator_loops(&[cx(0.0, 0.0), cx(1.0, 0.0)], BasePoint::At(cx(0.5, 1.0)), None).unwrap(),
            dim: n,
            matrices: vec![diag(2.0, 3.0), diag(-1.0, 5.0)],
            errors: vec![0.0, 0.0],
            infinity: linalg::identity(n),
            infinity_error: 0.0,
            convention: ACTION_CONVENTION,
        };
        let adm = admissibility_check(&rep, &[], &Tolerances::default()).unwrap();
        assert_eq!(adm.irreducible, Some(false));
        assert!(adm.common_eigenvector_residual < 1e-12);
    }
}
