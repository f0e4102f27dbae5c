//! Analytic continuation of linear systems `y′ = A(t)·y + b(t)` along
//! polygonal paths by stepwise Taylor expansion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Zero;

use crate::config::ContinuationConfig;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::rational::RationalFunction;
use crate::roots::{cluster_points, cluster_tol, roots};
use crate::scalar::{abs, to_c64, Real};
use crate::singular::{default_clearance, Operator};

pub type Rf<T> = RationalFunction<Complex<T>>;

/// Polygonal path in the `t`-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPolyline<T: Real> {
    vertices: Vec<Complex<T>>,
    closed: bool,
}

impl<T: Real> PathPolyline<T> {
    /// Requires at least two vertices with consecutive ones distinct. The path
    /// is closed when its first and last vertices coincide.
    pub fn new(vertices: Vec<Complex<T>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices".into()));
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath(format!(
                "repeated consecutive vertex {}",
                to_c64(w[0])
            )));
        }
        if vertices.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidPath("non-finite vertex".into()));
        }
        let closed = vertices.first() == vertices.last();
        Ok(Self { vertices, closed })
    }

    pub fn segment(a: Complex<T>, b: Complex<T>) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn vertices(&self) -> &[Complex<T>] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> Complex<T> {
        self.vertices[0]
    }

    pub fn end(&self) -> Complex<T> {
        *self.vertices.last().expect("nonempty")
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self {
            vertices,
            closed: self.closed,
        }
    }

    /// This path followed by `next`, which must start where this one ends.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.end() != next.start() {
            return Err(Error::InvalidPath("concatenated paths do not meet".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&next.vertices[1..]);
        Self::new(vertices)
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| abs(w[1] - w[0])).sum()
    }

    /// Distance from `p` to the nearest point of the path.
    pub fn distance_to(&self, p: Complex<T>) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| segment_distance(w[0], w[1], p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance<T: Real>(a: Complex<T>, b: Complex<T>, p: Complex<T>) -> f64 {
    let (a, b, p) = (to_c64(a), to_c64(b), to_c64(p));
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * s - p).norm()
}

/// First-order system `y′ = A·y (+ b)` with rational entries.
#[derive(Clone, Debug)]
pub struct CompanionSystem<T: Real> {
    dim: usize,
    /// Row-major `dim × dim` entries.
    matrix: Vec<Rf<T>>,
    inhomogeneity: Option<Vec<Rf<T>>>,
    poles: Vec<Complex<T>>,
}

impl<T: Real> CompanionSystem<T> {
    /// General system from explicit entries. Poles are the roots of all
    /// entry denominators.
    pub fn from_entries(dim: usize, matrix: Vec<Rf<T>>, inhomogeneity: Option<Vec<Rf<T>>>) -> Result<Self> {
        if dim == 0 || matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        if let Some(b) = &inhomogeneity {
            if b.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: b.len(),
                });
            }
        }
        let mut raw = Vec::new();
        for f in matrix.iter().chain(inhomogeneity.iter().flatten()) {
            if !f.is_polynomial() {
                raw.extend(roots(f.denominator())?.into_iter().map(|c| c.center));
            }
        }
        let poles = cluster_points(&raw, cluster_tol::<T>())
            .into_iter()
            .map(|c| c.center)
            .collect();
        Ok(Self {
            dim,
            matrix,
            inhomogeneity,
            poles,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rf<T> {
        &self.matrix[i * self.dim + j]
    }

    pub fn inhomogeneity(&self) -> Option<&[Rf<T>]> {
        self.inhomogeneity.as_deref()
    }

    pub fn is_inhomogeneous(&self) -> bool {
        self.inhomogeneity.is_some()
    }

    /// Finite points where some entry has a pole.
    pub fn poles(&self) -> &[Complex<T>] {
        &self.poles
    }

    /// Entries of the homogeneous system of dimension `dim + 1` whose last
    /// coordinate is constant and multiplies `b`.
    fn augmented_entries(&self) -> (usize, Vec<&Rf<T>>, Rf<T>) {
        let zero = Rf::<T>::zero();
        let Some(b) = &self.inhomogeneity else {
            return (self.dim, self.matrix.iter().collect(), zero);
        };
        let m = self.dim + 1;
        let mut out = Vec::with_capacity(m * m);
        for i in 0..self.dim {
            out.extend(self.matrix[i * self.dim..(i + 1) * self.dim].iter());
            out.push(&b[i]);
        }
        // the zero entries of the last row are patched in by the caller
        (m, out, zero)
    }
}

/// Companion system of `D h = g`: `y = (h, h′, …, h^(n−1))`, subdiagonal
/// identity, last row `−p_i/p_n`, and `b = (0, …, 0, g/p_n)` when `g` is given.
pub fn companion_system<T: Real>(d: &Operator<T>, g: Option<&Rf<T>>) -> Result<CompanionSystem<T>> {
    d.require_order(1)?;
    let n = d.order();
    let lead = d.leading();
    let mut matrix = vec![Rf::<T>::zero(); n * n];
    for i in 0..n - 1 {
        matrix[i * n + i + 1] = Rf::one();
    }
    for j in 0..n {
        matrix[(n - 1) * n + j] = -&d.coeff(j).try_div(lead)?;
    }
    let inhomogeneity = match g {
        Some(g) => {
            let mut b = vec![Rf::<T>::zero(); n];
            b[n - 1] = g.try_div(lead)?;
            Some(b)
        }
        None => None,
    };
    CompanionSystem::from_entries(n, matrix, inhomogeneity)
}

/// Jet of a solution at a point: `(h(t), h′(t), …, h^(n−1)(t))`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVector<T: Real> {
    pub base: Complex<T>,
    pub values: CVector<T>,
}

impl<T: Real> JetVector<T> {
    pub fn new(base: Complex<T>, values: Vec<Complex<T>>) -> Self {
        Self {
            base,
            values: DVector::from_vec(values),
        }
    }

    pub fn zero(base: Complex<T>, dim: usize) -> Self {
        Self {
            base,
            values: DVector::zeros(dim),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransferResult<T: Real> {
    /// Transport of jets of homogeneous solutions.
    pub matrix: CMatrix<T>,
    /// Transport of the zero jet under the inhomogeneous system.
    pub particular_shift: CVector<T>,
    /// Heuristic bound on the error of `matrix` and `particular_shift`
    /// together, in the Frobenius norm.
    pub error_estimate: f64,
    pub steps_taken: usize,
    /// Largest norm reached by the transported zero jet along the path.
    pub shift_peak: f64,
}

impl<T: Real> TransferResult<T> {
    /// `[[matrix, shift], [0, 1]]`.
    pub fn augmented(&self) -> CMatrix<T> {
        let n = self.matrix.nrows();
        let mut m = CMatrix::<T>::identity(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.matrix);
        m.view_mut((0, n), (n, 1)).copy_from(&self.particular_shift);
        m
    }
}

/// Local Taylor data for one step.
struct Step<T: Real> {
    /// Nonzero entries `(row, col, value)` of `A_j·h^(j+1)` for each `j`.
    coeffs: Vec<Vec<(usize, usize, Complex<T>)>>,
}

fn local_series<T: Real>(f: &Rf<T>, c: Complex<T>, h: Complex<T>, order: usize) -> Vec<Complex<T>> {
    // coefficients of f(c + h·x), scaled by one extra factor of h
    let mut out = vec![Complex::<T>::zero(); order + 1];
    if f.is_zero() {
        return out;
    }
    if let Some(k) = f.as_constant() {
        out[0] = k * h;
        return out;
    }
    let num = f.numerator().taylor_shift(&c);
    let den = f.denominator().taylor_shift(&c);
    let d0 = den.coeff(0);
    let dd = den.degree().unwrap_or(0);
    let mut a = vec![Complex::<T>::zero(); order + 1];
    let mut hp = h;
    for k in 0..=order {
        let mut s = num.coeff(k);
        for j in 1..=k.min(dd) {
            s -= den.coeff(j) * a[k - j];
        }
        a[k] = s / d0;
        out[k] = a[k] * hp;
        hp *= h;
    }
    out
}

fn fnorm<T: Real>(v: &[Complex<T>]) -> f64 {
    v.iter()
        .map(|z| z.norm_sqr().to_f64().unwrap_or(f64::NAN))
        .sum::<f64>()
        .sqrt()
}

struct Engine<'a, T: Real> {
    m: usize,
    entries: Vec<&'a Rf<T>>,
    zero: Rf<T>,
    poles: &'a [Complex<T>],
    config: &'a ContinuationConfig,
}

enum StepOutcome<T: Real> {
    Done { transfer: Vec<Complex<T>>, error: f64 },
    Diverged,
}

impl<T: Real> Engine<'_, T> {
    fn entry(&self, i: usize, j: usize) -> &Rf<T> {
        if i * self.m + j < self.entries.len() {
            self.entries[i * self.m + j]
        } else {
            &self.zero
        }
    }

    fn radius(&self, z: Complex<T>) -> f64 {
        self.poles.iter().map(|p| abs(*p - z)).fold(f64::INFINITY, f64::min)
    }

    fn prepare(&self, c: Complex<T>, h: Complex<T>) -> Step<T> {
        let order = self.config.max_order;
        let mut coeffs = vec![Vec::new(); order + 1];
        for i in 0..self.m {
            for j in 0..self.m {
                let f = self.entry(i, j);
                if f.is_zero() {
                    continue;
                }
                for (k, v) in local_series(f, c, h, order).into_iter().enumerate() {
                    if !v.is_zero() {
                        coeffs[k].push((i, j, v));
                    }
                }
            }
        }
        Step { coeffs }
    }

    /// Taylor transfer matrix over one step of length `|h|` from `c`.
    fn step(&self, c: Complex<T>, h: Complex<T>) -> StepOutcome<T> {
        let m = self.m;
        let cfg = self.config;
        let target = cfg.precision_target.max(T::eps());
        let geometric = abs(h) / self.radius(c);
        let data = self.prepare(c, h);
        let mut terms: Vec<Vec<Complex<T>>> = Vec::with_capacity(cfg.max_order + 1);
        let mut norms = Vec::with_capacity(cfg.max_order + 1);
        let mut id = vec![Complex::<T>::zero(); m * m];
        for i in 0..m {
            id[i * m + i] = Complex::new(T::one(), T::zero());
        }
        let mut sum = id.clone();
        terms.push(id);
        norms.push((m as f64).sqrt());
        for k in 0..cfg.max_order {
            let mut next = vec![Complex::<T>::zero(); m * m];
            for (j, nz) in data.coeffs.iter().enumerate().take(k + 1) {
                let prev = &terms[k - j];
                for &(r, col, v) in nz {
                    let src = &prev[col * m..(col + 1) * m];
                    let dst = &mut next[r * m..(r + 1) * m];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += v * *s;
                    }
                }
            }
            let scale = T::one() / T::of((k + 1) as f64);
            for z in next.iter_mut() {
                *z *= scale;
            }
            for (s, z) in sum.iter_mut().zip(&next) {
                *s += *z;
            }
            norms.push(fnorm(&next));
            terms.push(next);
            let order = k + 1;
            if order < cfg.min_order {
                continue;
            }
            let last = norms[order].max(norms[order - 1]);
            let sum_norm = fnorm(&sum).max(1.0);
            if last == 0.0 {
                return self.finish(sum, 0.0, &norms);
            }
            let observed = if norms[order - 2] > 0.0 {
                (last / norms[order - 2]).sqrt()
            } else {
                1.0
            };
            let q = geometric.max(observed);
            if q >= 0.95 {
                continue;
            }
            let tail = last * q / (1.0 - q);
            if tail <= target * sum_norm {
                return self.finish(sum, tail, &norms);
            }
        }
        StepOutcome::Diverged
    }

    fn finish(&self, sum: Vec<Complex<T>>, tail: f64, norms: &[f64]) -> StepOutcome<T> {
        // rounding in the recursion grows with the size of the terms
        let roundoff = 4.0 * self.m as f64 * T::eps() * norms.iter().sum::<f64>();
        StepOutcome::Done {
            transfer: sum,
            error: tail + roundoff,
        }
    }
}

fn check_clearance<T: Real>(path: &PathPolyline<T>, poles: &[Complex<T>], clearance: f64) -> Result<()> {
    for p in poles {
        let d = path.distance_to(*p);
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

/// Transports the fundamental matrix (and the zero jet, for inhomogeneous
/// systems) along `path`.
pub fn transfer<T: Real>(
    system: &CompanionSystem<T>,
    path: &PathPolyline<T>,
    config: &ContinuationConfig,
) -> Result<TransferResult<T>> {
    let clearance = config
        .clearance
        .unwrap_or_else(|| default_clearance(system.poles()));
    check_clearance(path, system.poles(), clearance)?;
    let (m, entries, zero) = system.augmented_entries();
    let engine = Engine {
        m,
        entries,
        zero,
        poles: system.poles(),
        config,
    };
    let n = system.dim();
    let mut p = vec![Complex::<T>::zero(); m * m];
    for i in 0..m {
        p[i * m + i] = Complex::new(T::one(), T::zero());
    }
    // first-order error bound ‖P_end‖·Σ e_k·‖P_k‖·‖P_{k+1}⁻¹‖, with a
    // plain norm-product bound as fallback if some P_k is not invertible
    let mut weighted = 0.0f64;
    let mut crude = 0.0f64;
    let mut invertible = true;
    let mut steps = 0usize;
    let mut peak = 0.0f64;
    let subdivision = config.subdivision.max(1) as f64;
    for w in path.vertices().windows(2) {
        let (a, b) = (w[0], w[1]);
        let total = abs(b - a);
        let dir = (b - a) / T::of(total);
        let mut z = a;
        let mut shrink = 1.0f64;
        loop {
            let remaining = abs(b - z);
            if remaining <= 1e-14 * total {
                break;
            }
            let cap = config.theta * engine.radius(z) / subdivision;
            let mut len = remaining.min(cap * shrink);
            let outcome = loop {
                let last_piece = len >= remaining * (1.0 - 1e-12);
                let h = if last_piece { b - z } else { dir * T::of(len) };
                match engine.step(z, h) {
                    StepOutcome::Done { transfer, error } => break Some((transfer, error, h, last_piece)),
                    StepOutcome::Diverged => {
                        len *= 0.5;
                        shrink *= 0.5;
                        if len < 1e-10 * total.max(1e-300) || len < 1e-12 {
                            break None;
                        }
                    }
                }
            };
            let Some((s, e, h, last_piece)) = outcome else {
                return Err(Error::PrecisionExhausted {
                    target: config.precision_target,
                    order: config.max_order,
                    near: format!("{}", to_c64(z)),
                });
            };
            let s_norm = fnorm(&s);
            let p_norm = fnorm(&p);
            let mut next = vec![Complex::<T>::zero(); m * m];
            for i in 0..m {
                for k in 0..m {
                    let v = s[i * m + k];
                    if v.is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        next[i * m + j] += v * p[k * m + j];
                    }
                }
            }
            p = next;
            let local = e + m as f64 * T::eps() * s_norm;
            crude = s_norm * crude + local * p_norm;
            if invertible {
                match DMatrix::from_row_slice(m, m, &p).try_inverse() {
                    Some(inv) => weighted += local * p_norm * crate::linalg::norm(&inv),
                    None => invertible = false,
                }
            }
            steps += 1;
            if system.is_inhomogeneous() {
                let shift: Vec<Complex<T>> = (0..n).map(|i| p[i * m + n]).collect();
                peak = peak.max(fnorm(&shift));
            }
            z = if last_piece { b } else { z + h };
            shrink = (shrink * 2.0).min(1.0);
        }
    }
    let full = DMatrix::from_row_slice(m, m, &p);
    let err = if invertible {
        (crate::linalg::norm(&full) * weighted).min(crude)
    } else {
        crude
    };
    let matrix = full.view((0, 0), (n, n)).into_owned();
    let particular_shift = if system.is_inhomogeneous() {
        full.view((0, n), (n, 1)).column(0).into_owned()
    } else {
        DVector::zeros(n)
    };
    if !err.is_finite() || matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::PrecisionExhausted {
            target: config.precision_target,
            order: config.max_order,
            near: format!("{}", to_c64(path.end())),
        });
    }
    Ok(TransferResult {
        matrix,
        particular_shift,
        error_estimate: err,
        steps_taken: steps,
        shift_peak: peak,
    })
}

/// Continues the jet `init` along `path`.
pub fn transport_jet<T: Real>(
    system: &CompanionSystem<T>,
    path: &PathPolyline<T>,
    init: &JetVector<T>,
    config: &ContinuationConfig,
) -> Result<JetVector<T>> {
    if init.values.len() != system.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            found: init.values.len(),
        });
    }
    let start = path.start();
    if abs(init.base - start) > 1e-12 * abs(start).max(1.0) {
        return Err(Error::InvalidPath("initial jet is not based at the path start".into()));
    }
    let t = transfer(system, path, config)?;
    Ok(JetVector {
        base: path.end(),
        values: &t.matrix * &init.values + &t.particular_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_operator, parse_rational};
    use crate::scalar::{cx, Coefficient};

    fn op(src: &str) -> Operator<f64> {
        parse_operator(src).unwrap().map(Complex::<f64>::from_exact)
    }

    fn rf(src: &str) -> Rf<f64> {
        parse_rational(src).unwrap().map(Complex::<f64>::from_exact)
    }

    fn circle(center: Complex<f64>, r: f64, start: f64, k: usize) -> PathPolyline<f64> {
        let mut v: Vec<Complex<f64>> = (0..k)
            .map(|j| center + Complex::from_polar(r, start + 2.0 * std::f64::consts::PI * j as f64 / k as f64))
            .collect();
        v.push(v[0]);
        PathPolyline::new(v).unwrap()
    }

    #[test]
    fn companion_of_second_derivative() {
        let s = companion_system(&op("D^2"), None).unwrap();
        assert!(s.entry(0, 1).as_constant() == Some(cx(1.0, 0.0)));
        assert!(s.entry(1, 0).is_zero() && s.entry(1, 1).is_zero() && s.entry(0, 0).is_zero());
        assert!(s.poles().is_empty());
    }

    #[test]
    fn legendre_companion_last_row() {
        let s = companion_system(&op("t*(1-t)*D^2 + (1-2*t)*D - 1/4"), None).unwrap();
        let t = cx::<f64>(0.3, 0.2);
        let q = t * (Complex::new(1.0, 0.0) - t);
        let a10 = s.entry(1, 0).eval(&t).unwrap();
        let a11 = s.entry(1, 1).eval(&t).unwrap();
        assert!(abs(a10 - Complex::new(0.25, 0.0) / q) < 1e-14);
        assert!(abs(a11 + (Complex::new(1.0, 0.0) - t * 2.0) / q) < 1e-14);
        assert_eq!(s.poles().len(), 2);
    }

    #[test]
    fn zero_system_transfers_identity() {
        let path = PathPolyline::new(vec![cx(0.0, 0.0), cx(1.0, 2.0), cx(-3.0, 0.5)]).unwrap();
        let s = companion_system(&op("D"), None).unwrap();
        let r = transfer(&s, &path, &ContinuationConfig::default()).unwrap();
        assert!((r.matrix[(0, 0)] - cx(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn euler_multiplier_around_unit_circle() {
        let lambda = 0.37;
        let s = companion_system(&op(&format!("t*D - {lambda}")), None).unwrap();
        let r = transfer(&s, &circle(cx(0.0, 0.0), 1.0, 0.0, 16), &ContinuationConfig::default()).unwrap();
        let expect = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * lambda);
        assert!((r.matrix[(0, 0)] - expect).norm() < 1e-12, "{}", r.matrix);
        assert!(r.error_estimate < 1e-10);
    }

    #[test]
    fn exponential_on_unit_segment() {
        let s = companion_system(&op("D - 1"), None).unwrap();
        let path = PathPolyline::segment(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
        let r = transfer(&s, &path, &ContinuationConfig::default()).unwrap();
        assert!((r.matrix[(0, 0)] - cx(std::f64::consts::E, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inhomogeneous_jet_transport() {
        let s = companion_system(&op("D"), Some(&rf("1"))).unwrap();
        let path = PathPolyline::segment(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
        let jet = transport_jet(&s, &path, &JetVector::zero(cx(0.0, 0.0), 1), &ContinuationConfig::default()).unwrap();
        assert!((jet.values[0] - cx(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(jet.base, cx(1.0, 0.0));
    }

    #[test]
    fn homogeneous_transport_is_matrix_action() {
        let s = companion_system(&op("D^2 + 1"), None).unwrap();
        let path = PathPolyline::segment(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
        let init = JetVector::new(cx(0.0, 0.0), vec![cx(1.0, 0.0), cx(2.0, 0.0)]);
        let jet = transport_jet(&s, &path, &init, &ContinuationConfig::default()).unwrap();
        let expect = 1f64.cos() + 2.0 * 1f64.sin();
        assert!((jet.values[0] - cx(expect, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn clearance_is_enforced() {
        let s = companion_system(&op("t*D - 1/2"), None).unwrap();
        let path = PathPolyline::segment(cx(-1.0, 0.01), cx(1.0, 0.01)).unwrap();
        let err = transfer(&s, &path, &ContinuationConfig::default()).unwrap_err();
        assert!(matches!(err, Error::PathTooCloseToSingularity { .. }));
    }

    #[test]
    fn jet_base_must_match_path() {
        let s = companion_system(&op("D"), None).unwrap();
        let path = PathPolyline::segment(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
        let init = JetVector::zero(cx(0.5, 0.0), 1);
        assert!(transport_jet(&s, &path, &init, &ContinuationConfig::default()).is_err());
    }

    #[test]
    fn path_validation() {
        assert!(PathPolyline::<f64>::new(vec![cx(0.0, 0.0)]).is_err());
        assert!(PathPolyline::<f64>::new(vec![cx(0.0, 0.0), cx(0.0, 0.0)]).is_err());
        let p = circle(cx(0.0, 0.0), 1.0, 0.0, 4);
        assert!(p.is_closed());
        assert!((p.distance_to(cx(0.0, 0.0)) - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
