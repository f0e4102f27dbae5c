//! Extension data of an inhomogeneous equation `D h = g`: the cocycle of
//! monodromy shifts of a particular solution, computed by continuation and
//! independently from the block monodromy of `(d/dt − g′/g)∘D`, together
//! with coboundary tests.

use nalgebra::DVector;
use num_complex::Complex;
use rayon::prelude::*;

use crate::config::{ContinuationConfig, Tolerances};
use crate::continuation::{companion_system, transfer, CompanionSystem, PathPolyline, Rf};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::monodromy::{generator_loops, loop_config, monodromy_representation, BasePoint, LoopPlan, MonodromyRepresentation};
use crate::operator::DifferentialOperator;
use crate::roots::roots;
use crate::scalar::{abs, Real};
use crate::singular::{fuchsian_check, singularities, Operator, SingularityProfile};

pub const COCYCLE_CONVENTION: &str = "a(gamma then delta) = a_delta + M_delta a_gamma";

/// `D h = g` with an inert twist label.
#[derive(Clone, Debug)]
pub struct InhomogeneousProblem<T: Real> {
    pub operator: Operator<T>,
    pub inhomogeneity: Rf<T>,
    pub twist: Option<i64>,
}

impl<T: Real> InhomogeneousProblem<T> {
    /// Rejects operators of order 0 and non-Fuchsian operators.
    pub fn new(operator: Operator<T>, inhomogeneity: Rf<T>, twist: Option<i64>) -> Result<Self> {
        operator.require_order(1)?;
        let report = fuchsian_check(&operator)?;
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
        Ok(Self {
            operator,
            inhomogeneity,
            twist,
        })
    }

    pub fn order(&self) -> usize {
        self.operator.order()
    }

    /// `g ≡ 0`: the extension splits and there is no extended operator.
    pub fn is_degenerate(&self) -> bool {
        self.inhomogeneity.is_zero()
    }

    pub fn profile(&self) -> Result<SingularityProfile<T>> {
        singularities(&self.operator)
    }

    /// Finite singular points of `D` together with the zeros and poles of `g`
    /// and the remaining poles of the inhomogeneous system. The latter are
    /// zeros of the leading coefficient shared by every coefficient of `D`:
    /// ordinary for `D h = 0` but poles of `g` divided by the leading term.
    pub fn punctures(&self) -> Result<Vec<Complex<T>>> {
        let mut pts = self.profile()?.finite_points();
        if !self.is_degenerate() {
            for p in [self.inhomogeneity.numerator(), self.inhomogeneity.denominator()] {
                pts.extend(roots(p)?.into_iter().map(|c| c.center));
            }
            pts.extend(self.system()?.poles().iter().copied());
        }
        Ok(pts)
    }

    pub fn loop_plan(&self, base: BasePoint<T>, config: &ContinuationConfig) -> Result<LoopPlan<T>> {
        generator_loops(&self.punctures()?, base, config.clearance)
    }

    /// Companion system of `D h = g`.
    pub fn system(&self) -> Result<CompanionSystem<T>> {
        companion_system(&self.operator, Some(&self.inhomogeneity))
    }
}

/// `(d/dt − g′/g)∘D`.
pub fn extended_operator<T: Real>(problem: &InhomogeneousProblem<T>) -> Result<Operator<T>> {
    let dlog = problem.inhomogeneity.dlog()?;
    let left = DifferentialOperator::new(vec![-&dlog, Rf::one()])?;
    Ok(left.compose(&problem.operator))
}

/// Per-generator shift vectors in the unit-jet basis at the base point.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle<T: Real> {
    pub vectors: Vec<CVector<T>>,
    pub errors: Vec<f64>,
    /// Size of the particular solution along the loops; residuals are
    /// measured relative to it when the cocycle itself is small.
    pub scale: f64,
}

impl<T: Real> Cocycle<T> {
    pub fn zero(dim: usize, generators: usize) -> Self {
        Self {
            vectors: vec![CVector::zeros(dim); generators],
            errors: vec![0.0; generators],
            scale: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.vectors.iter().map(|v| linalg::vnorm(v).powi(2)).sum::<f64>().sqrt()
    }

    /// Difference with errors and scales combined.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self {
            vectors: self.vectors.iter().zip(&other.vectors).map(|(a, b)| a - b).collect(),
            errors: self.errors.iter().zip(&other.errors).map(|(a, b)| a + b).collect(),
            scale: self.scale.max(other.scale),
        })
    }

    /// Largest per-generator distance to `other`, with the sum of both error
    /// estimates for that generator.
    pub fn max_distance(&self, other: &Self) -> (f64, f64) {
        self.vectors
            .iter()
            .zip(&other.vectors)
            .zip(self.errors.iter().zip(&other.errors))
            .map(|((a, b), (ea, eb))| (linalg::vnorm(&(a - b)), ea + eb))
            .fold((0.0, 0.0), |acc, x| (acc.0.max(x.0), acc.1.max(x.1)))
    }
}

fn check_dims<T: Real>(rep: &MonodromyRepresentation<T>, a: &Cocycle<T>) -> Result<()> {
    if a.len() != rep.generator_count() {
        return Err(Error::DimensionMismatch {
            expected: rep.generator_count(),
            found: a.len(),
        });
    }
    if let Some(v) = a.vectors.iter().find(|v| v.len() != rep.dim) {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            found: v.len(),
        });
    }
    Ok(())
}

/// Shift of the particular solution with initial jet `v` along each loop:
/// `a_γ = M_γ v + s_γ − v`, where `s_γ` is the transport of the zero jet.
pub fn cocycle_with_initial_jet<T: Real>(
    problem: &InhomogeneousProblem<T>,
    rep: &MonodromyRepresentation<T>,
    initial: &CVector<T>,
    config: &ContinuationConfig,
) -> Result<Cocycle<T>> {
    if initial.len() != problem.order() {
        return Err(Error::DimensionMismatch {
            expected: problem.order(),
            found: initial.len(),
        });
    }
    let system = problem.system()?;
    let cfg = loop_config(config, &rep.plan);
    let results: Vec<Result<_>> = rep
        .plan
        .loops
        .par_iter()
        .map(|l| transfer(&system, &l.path, &cfg))
        .collect();
    let mut out = Cocycle::zero(problem.order(), results.len());
    let v_norm = linalg::vnorm(initial);
    for (i, r) in results.into_iter().enumerate() {
        let r = r?;
        out.vectors[i] = &r.matrix * initial + &r.particular_shift - initial;
        out.errors[i] = r.error_estimate * (1.0 + v_norm);
        out.scale = out.scale.max(r.shift_peak);
    }
    Ok(out)
}

/// Cocycle of the particular solution with zero jet at the base point.
pub fn cocycle_by_continuation<T: Real>(
    problem: &InhomogeneousProblem<T>,
    rep: &MonodromyRepresentation<T>,
    config: &ContinuationConfig,
) -> Result<Cocycle<T>> {
    if problem.is_degenerate() {
        return Ok(Cocycle::zero(problem.order(), rep.generator_count()));
    }
    cocycle_with_initial_jet(problem, rep, &CVector::zeros(problem.order()), config)
}

/// Shift and homogeneous transfer of the particular solution along an
/// arbitrary closed path at the base point.
pub fn path_cocycle<T: Real>(
    problem: &InhomogeneousProblem<T>,
    path: &PathPolyline<T>,
    plan: &LoopPlan<T>,
    config: &ContinuationConfig,
) -> Result<(CMatrix<T>, CVector<T>, f64)> {
    let r = transfer(&problem.system()?, path, &loop_config(config, plan))?;
    Ok((r.matrix, r.particular_shift, r.error_estimate))
}

#[derive(Clone, Debug)]
pub struct BlockMonodromyReport<T: Real> {
    /// `None` when `g ≡ 0`.
    pub extended: Option<Operator<T>>,
    /// Initial frame: `(n+1)`-jets of the unit-jet solutions and of the
    /// particular solution with zero jet.
    pub frame: CMatrix<T>,
    /// `F⁻¹ T F` for each generator, ideally `[[M, a], [0, 1]]`.
    pub matrices: Vec<CMatrix<T>>,
    pub cocycle: Cocycle<T>,
    /// `‖bottom row − (0, …, 0, 1)‖` per generator.
    pub bottom_row_deviation: Vec<f64>,
}

impl<T: Real> BlockMonodromyReport<T> {
    pub fn max_bottom_row_deviation(&self) -> f64 {
        self.bottom_row_deviation.iter().cloned().fold(0.0, f64::max)
    }
}

/// Cocycle read off from the monodromy of the extended operator in the
/// frame adapted to `D`.
pub fn cocycle_by_block<T: Real>(
    problem: &InhomogeneousProblem<T>,
    rep: &MonodromyRepresentation<T>,
    config: &ContinuationConfig,
) -> Result<BlockMonodromyReport<T>> {
    let n = problem.order();
    let k = rep.generator_count();
    let block = |m: &CMatrix<T>, a: &CVector<T>| {
        let mut b = CMatrix::<T>::identity(n + 1, n + 1);
        b.view_mut((0, 0), (n, n)).copy_from(m);
        b.view_mut((0, n), (n, 1)).copy_from(a);
        b
    };
    if problem.is_degenerate() {
        let zero = CVector::zeros(n);
        return Ok(BlockMonodromyReport {
            extended: None,
            frame: CMatrix::identity(n + 1, n + 1),
            matrices: rep.matrices.iter().map(|m| block(m, &zero)).collect(),
            cocycle: Cocycle::zero(n, k),
            bottom_row_deviation: vec![0.0; k],
        });
    }
    let t0 = rep.plan.base;
    let d = &problem.operator;
    let lead = d
        .leading()
        .eval(&t0)
        .map_err(|e| Error::LiftFailure(e.to_string()))?;
    if abs(lead) == 0.0 {
        return Err(Error::LiftFailure("leading coefficient vanishes at the base point".into()));
    }
    let mut frame = CMatrix::<T>::zeros(n + 1, n + 1);
    for i in 0..n {
        frame[(i, i)] = Complex::new(T::one(), T::zero());
        let p = d
            .coeff(i)
            .eval(&t0)
            .map_err(|e| Error::LiftFailure(e.to_string()))?;
        frame[(n, i)] = -p / lead;
    }
    let g0 = problem
        .inhomogeneity
        .eval(&t0)
        .map_err(|e| Error::LiftFailure(e.to_string()))?;
    frame[(n, n)] = g0 / lead;
    let inv = linalg::inverse(&frame)
        .ok_or_else(|| Error::LiftFailure("the inhomogeneity vanishes at the base point".into()))?;
    let cond = linalg::norm(&frame) * linalg::norm(&inv);
    let extended = extended_operator(problem)?;
    let system = companion_system(&extended, None)?;
    let cfg = loop_config(config, &rep.plan);
    let results: Vec<Result<_>> = rep
        .plan
        .loops
        .par_iter()
        .map(|l| transfer(&system, &l.path, &cfg))
        .collect();
    let mut matrices = Vec::with_capacity(k);
    let mut cocycle = Cocycle::zero(n, k);
    let mut deviation = Vec::with_capacity(k);
    let mut last_row = DVector::<Complex<T>>::zeros(n + 1);
    last_row[n] = Complex::new(T::one(), T::zero());
    for (i, r) in results.into_iter().enumerate() {
        let r = r?;
        let b = &inv * &r.matrix * &frame;
        cocycle.vectors[i] = b.view((0, n), (n, 1)).column(0).into_owned();
        let row: CVector<T> = b.row(n).transpose();
        deviation.push(linalg::vnorm(&(row - &last_row)));
        // the frame conjugation amplifies transfer errors and rounding
        cocycle.errors[i] = cond * (r.error_estimate + 4.0 * T::eps() * linalg::norm(&r.matrix));
        let col_peak = linalg::vnorm(&cocycle.vectors[i]);
        cocycle.scale = cocycle.scale.max(col_peak);
        matrices.push(b);
    }
    Ok(BlockMonodromyReport {
        extended: Some(extended),
        frame,
        matrices,
        cocycle,
        bottom_row_deviation: deviation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoboundaryResult<T: Real> {
    pub verdict: Verdict,
    /// Minimum-norm `c` with `a_γ ≈ (M_γ − I)c`.
    pub witness: CVector<T>,
    /// `‖(M − I)c − a‖` relative to `max(‖a‖, cocycle scale)`.
    pub residual: f64,
    pub absolute_residual: f64,
    pub threshold: f64,
}

fn stacked<T: Real>(rep: &MonodromyRepresentation<T>) -> CMatrix<T> {
    let n = rep.dim;
    let mut s = CMatrix::<T>::zeros(n * rep.generator_count(), n);
    for (i, m) in rep.matrices.iter().enumerate() {
        let block = m - linalg::identity::<T>(n);
        s.view_mut((i * n, 0), (n, n)).copy_from(&block);
    }
    s
}

/// Least-squares test of `a_γ = (M_γ − I)c` over all generators. The verdict
/// is inconclusive when the relative residual lies within a factor 10 of
/// the class tolerance.
pub fn is_coboundary<T: Real>(
    rep: &MonodromyRepresentation<T>,
    a: &Cocycle<T>,
    tol: &Tolerances,
) -> Result<CoboundaryResult<T>> {
    check_dims(rep, a)?;
    let n = rep.dim;
    let s = stacked(rep);
    let mut rhs = CVector::<T>::zeros(n * a.len());
    for (i, v) in a.vectors.iter().enumerate() {
        rhs.rows_mut(i * n, n).copy_from(v);
    }
    let c = linalg::lstsq_min_norm(&s, &rhs, tol.rank);
    let absolute = linalg::vnorm(&(&s * &c - &rhs));
    let denom = linalg::vnorm(&rhs).max(a.scale);
    let residual = if denom > 0.0 { absolute / denom } else { 0.0 };
    let threshold = tol.class;
    let verdict = if residual < threshold / 10.0 {
        Verdict::Trivial
    } else if residual > threshold * 10.0 {
        Verdict::Nontrivial
    } else {
        Verdict::Inconclusive
    };
    Ok(CoboundaryResult {
        verdict,
        witness: c,
        residual,
        absolute_residual: absolute,
        threshold,
    })
}

/// `a_γ + (M_γ − I)c` for every generator.
pub fn shift_by_coboundary<T: Real>(
    rep: &MonodromyRepresentation<T>,
    a: &Cocycle<T>,
    c: &CVector<T>,
) -> Result<Cocycle<T>> {
    check_dims(rep, a)?;
    if c.len() != rep.dim {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            found: c.len(),
        });
    }
    let mut out = a.clone();
    for (v, m) in out.vectors.iter_mut().zip(&rep.matrices) {
        *v += m * c - c;
    }
    Ok(out)
}

/// Whether `a − b` is a coboundary.
pub fn class_equal<T: Real>(
    rep: &MonodromyRepresentation<T>,
    a: &Cocycle<T>,
    b: &Cocycle<T>,
    tol: &Tolerances,
) -> Result<CoboundaryResult<T>> {
    is_coboundary(rep, &a.difference(b)?, tol)
}

/// A cocycle together with its class verdict.
#[derive(Clone, Debug)]
pub struct ExtensionClass<T: Real> {
    pub cocycle: Cocycle<T>,
    pub verdict: Verdict,
    /// Witness `c` of triviality; present only for trivial classes.
    pub witness: Option<CVector<T>>,
    pub residual: f64,
    pub twist: Option<i64>,
}

pub fn extension_class<T: Real>(
    problem: &InhomogeneousProblem<T>,
    rep: &MonodromyRepresentation<T>,
    cocycle: Cocycle<T>,
    tol: &Tolerances,
) -> Result<ExtensionClass<T>> {
    let r = is_coboundary(rep, &cocycle, tol)?;
    Ok(ExtensionClass {
        cocycle,
        verdict: r.verdict,
        witness: (r.verdict == Verdict::Trivial).then_some(r.witness),
        residual: r.residual,
        twist: problem.twist,
    })
}

/// Cocycle of the relation word: every generator in order, then the loop
/// around infinity.
#[derive(Clone, Debug)]
pub struct RelationCheck<T: Real> {
    pub infinity_shift: CVector<T>,
    pub infinity_matrix: CMatrix<T>,
    /// Norm of the accumulated shift along the relation word.
    pub residual: f64,
    /// Accumulated error estimate along the word.
    pub bound: f64,
}

pub fn relation_check<T: Real>(
    problem: &InhomogeneousProblem<T>,
    rep: &MonodromyRepresentation<T>,
    cocycle: &Cocycle<T>,
    config: &ContinuationConfig,
) -> Result<RelationCheck<T>> {
    relation_check_with_jet(problem, rep, cocycle, &CVector::zeros(rep.dim), config)
}

/// As [`relation_check`] for a cocycle built from the initial jet `initial`
/// (see [`cocycle_with_initial_jet`]); the infinity loop uses the same jet.
pub fn relation_check_with_jet<T: Real>(
    problem: &InhomogeneousProblem<T>,
    rep: &MonodromyRepresentation<T>,
    cocycle: &Cocycle<T>,
    initial: &CVector<T>,
    config: &ContinuationConfig,
) -> Result<RelationCheck<T>> {
    check_dims(rep, cocycle)?;
    if initial.len() != rep.dim {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            found: initial.len(),
        });
    }
    let n = rep.dim;
    let Some(path) = &rep.plan.infinity_loop else {
        return Ok(RelationCheck {
            infinity_shift: CVector::zeros(n),
            infinity_matrix: linalg::identity(n),
            residual: 0.0,
            bound: 0.0,
        });
    };
    let (m_inf, s_inf, e_inf) = path_cocycle(problem, path, &rep.plan, config)?;
    let a_inf = &m_inf * initial + s_inf - initial;
    let e_shift = e_inf * (1.0 + linalg::vnorm(initial));
    let mut acc = CVector::<T>::zeros(n);
    let mut bound = 0.0;
    let steps = rep
        .matrices
        .iter()
        .zip(&cocycle.vectors)
        .zip(rep.errors.iter().zip(&cocycle.errors))
        .map(|((m, a), (em, ea))| (m.clone(), a.clone(), *em, *ea))
        .chain(std::iter::once((m_inf.clone(), a_inf.clone(), e_inf, e_shift)));
    for (m, a, em, ea) in steps {
        bound = linalg::norm(&m) * bound + em * linalg::vnorm(&acc) + ea;
        acc = a + &m * acc;
    }
    Ok(RelationCheck {
        infinity_shift: a_inf,
        infinity_matrix: m_inf,
        residual: linalg::vnorm(&acc),
        bound,
    })
}

/// Agreement of the two cocycle routes.
#[derive(Clone, Debug)]
pub struct RouteAgreement<T: Real> {
    pub max_difference: f64,
    pub combined_error: f64,
    pub vectors_agree: bool,
    pub class: CoboundaryResult<T>,
    pub pass: bool,
}

pub fn route_agreement<T: Real>(
    rep: &MonodromyRepresentation<T>,
    continuation: &Cocycle<T>,
    block: &Cocycle<T>,
    tol: &Tolerances,
) -> Result<RouteAgreement<T>> {
    let (max_difference, combined_error) = continuation.max_distance(block);
    let class = class_equal(rep, continuation, block, tol)?;
    let vectors_agree = max_difference <= combined_error;
    let pass = vectors_agree && class.verdict == Verdict::Trivial;
    Ok(RouteAgreement {
        max_difference,
        combined_error,
        vectors_agree,
        class,
        pass,
    })
}

/// Everything computed for one inhomogeneous problem.
#[derive(Clone, Debug)]
pub struct ExtensionAnalysis<T: Real> {
    pub profile: SingularityProfile<T>,
    pub representation: MonodromyRepresentation<T>,
    pub continuation: Cocycle<T>,
    pub block: BlockMonodromyReport<T>,
    pub class: ExtensionClass<T>,
    pub agreement: RouteAgreement<T>,
}

/// Plans loops around the enlarged puncture set, computes the monodromy and
/// both cocycle routes (concurrently), and compares them.
pub fn analyze_extension<T: Real>(
    problem: &InhomogeneousProblem<T>,
    base: BasePoint<T>,
    config: &ContinuationConfig,
    tol: &Tolerances,
) -> Result<ExtensionAnalysis<T>> {
    let profile = problem.profile()?;
    let plan = problem.loop_plan(base, config)?;
    let rep = monodromy_representation(&problem.operator, &plan, config)?;
    let (continuation, block) = rayon::join(
        || cocycle_by_continuation(problem, &rep, config),
        || cocycle_by_block(problem, &rep, config),
    );
    let (continuation, block) = (continuation?, block?);
    let agreement = route_agreement(&rep, &continuation, &block.cocycle, tol)?;
    let class = extension_class(problem, &rep, continuation.clone(), tol)?;
    Ok(ExtensionAnalysis {
        profile,
        representation: rep,
        continuation,
        block,
        class,
        agreement,
    })
}
