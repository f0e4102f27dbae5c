//! Polynomial roots by companion-matrix eigenvalues, Newton polishing and
//! clustering into multiple roots.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{abs, Real};

/// Relative distance below which eigenvalues are candidates for one multiple
/// root. Eigenvalues of an m-fold root spread like `eps^(1/m)`; the tolerance
/// admits triple roots.
pub fn cluster_tol<T: Real>() -> f64 {
    10.0 * T::eps().cbrt()
}

/// Relative size below which a shifted coefficient counts as vanishing.
pub const VALUATION_TOL: f64 = 1e-9;

/// A root together with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster<T: Real> {
    pub center: Complex<T>,
    pub multiplicity: usize,
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues<T: Real>(m: &DMatrix<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(m.clone(), T::of(T::eps()), 10_000)
        .ok_or_else(|| Error::RootIsolation("Schur iteration did not converge".into()))?;
    let (_, tri) = schur.unpack();
    let ev: Vec<_> = (0..n).map(|i| tri[(i, i)]).collect();
    if ev.iter().any(|z| !abs(*z).is_finite()) {
        return Err(Error::RootIsolation("non-finite eigenvalue".into()));
    }
    Ok(ev)
}

/// All roots with multiplicity: unclustered companion eigenvalues.
pub fn raw_roots<T: Real>(p: &Polynomial<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let Some(deg) = p.degree() else {
        return Err(Error::RootIsolation("roots of the zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let c = p.coeffs();
    // exact zeros at the origin are peeled off first
    let low = c.iter().take_while(|z| z.is_zero()).count();
    let mut roots = vec![Complex::zero(); low];
    let reduced = Polynomial::new(c[low..].to_vec());
    let d = deg - low;
    if d == 0 {
        return Ok(roots);
    }
    let lead = reduced.coeffs()[d];
    let mut comp = DMatrix::<Complex<T>>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = Complex::new(T::one(), T::zero());
    }
    for i in 0..d {
        comp[(i, d - 1)] = -reduced.coeffs()[i] / lead;
    }
    roots.extend(eigenvalues(&comp)?);
    Ok(roots)
}

fn polish<T: Real>(
    p: &Polynomial<Complex<T>>,
    dp: &Polynomial<Complex<T>>,
    mut z: Complex<T>,
) -> Complex<T> {
    let mut r = abs(p.eval(&z));
    for _ in 0..8 {
        let d = dp.eval(&z);
        if abs(d) == 0.0 {
            break;
        }
        let cand = z - p.eval(&z) / d;
        let rc = abs(p.eval(&cand));
        if rc < r {
            z = cand;
            r = rc;
        } else {
            break;
        }
    }
    z
}

/// Roots grouped into clusters. A cluster of size `m` starts at the mean of
/// its eigenvalues and is polished as a simple root of `p^(m−1)`.
pub fn roots<T: Real>(p: &Polynomial<Complex<T>>) -> Result<Vec<RootCluster<T>>> {
    let raw = raw_roots(p)?;
    let clusters = cluster_points(&raw, cluster_tol::<T>());
    let mut out = Vec::with_capacity(clusters.len());
    for mut cl in clusters {
        let mut q = p.clone();
        for _ in 1..cl.multiplicity {
            q = q.derivative();
        }
        if !cl.center.is_zero() || !q.coeff(0).is_zero() {
            cl.center = polish(&q, &q.derivative(), cl.center);
        }
        if cl.multiplicity > 1 && valuation_at(p, &cl.center) < cl.multiplicity {
            return Err(Error::RootIsolation(format!(
                "{} roots near {} cannot be separated at working precision",
                cl.multiplicity, cl.center
            )));
        }
        out.push(cl);
    }
    Ok(out)
}

/// Single-linkage clustering of points at relative distance `tol`.
pub fn cluster_points<T: Real>(points: &[Complex<T>], tol: f64) -> Vec<RootCluster<T>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0f64.max(abs(points[i])).max(abs(points[j]));
            if abs(points[i] - points[j]) <= tol * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex<T>>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(points[i]),
            None => groups.push((r, vec![points[i]])),
        }
    }
    let mut out: Vec<RootCluster<T>> = groups
        .into_iter()
        .map(|(_, g)| {
            let m = g.len();
            let sum = g.iter().fold(Complex::<T>::zero(), |a, z| a + z);
            RootCluster {
                center: sum / Complex::new(T::of(m as f64), T::zero()),
                multiplicity: m,
            }
        })
        .collect();
    out.sort_by(|a, b| order_key(a.center).partial_cmp(&order_key(b.center)).unwrap());
    out
}

fn order_key<T: Real>(z: Complex<T>) -> (f64, f64) {
    let z = crate::scalar::to_c64(z);
    (z.re, z.im)
}

/// Order of vanishing of `p` at `s`: the number of leading coefficients of
/// `p(s + x)` that are negligible relative to the coefficient norm.
/// The zero polynomial has valuation `usize::MAX`.
pub fn valuation_at<T: Real>(p: &Polynomial<Complex<T>>, s: &Complex<T>) -> usize {
    if p.is_zero() {
        return usize::MAX;
    }
    let shifted = p.taylor_shift(s);
    let c = shifted.coeffs();
    // coefficients measured at unit radius around s
    let norm: f64 = c.iter().map(|z| abs(*z)).sum();
    let tol = VALUATION_TOL.max(64.0 * T::eps());
    c.iter()
        .take_while(|z| abs(**z) <= tol * norm)
        .count()
        .min(c.len() - 1)
}

/// Monic approximate gcd of two nonzero polynomials, built from matched root clusters.
pub fn approximate_gcd<T: Real>(
    a: &Polynomial<Complex<T>>,
    b: &Polynomial<Complex<T>>,
) -> Polynomial<Complex<T>> {
    let one = Polynomial::one();
    if a.is_constant() || b.is_constant() {
        return one;
    }
    let (Ok(ra), Ok(rb)) = (roots(a), roots(b)) else {
        return one;
    };
    let mut g = one;
    for ca in &ra {
        let ma = ca.multiplicity;
        let mb: usize = rb
            .iter()
            .filter(|cb| {
                let scale = 1.0f64.max(abs(ca.center)).max(abs(cb.center));
                abs(ca.center - cb.center) <= cluster_tol::<T>() * scale
            })
            .map(|cb| cb.multiplicity)
            .sum();
        let m = ma.min(mb);
        if m == 0 {
            continue;
        }
        // confirm against both polynomials at a common center
        let center = ca.center;
        let m = m.min(valuation_at(a, &center)).min(valuation_at(b, &center));
        for _ in 0..m {
            g = &g * &Polynomial::linear_factor(center);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type P = Polynomial<Complex<f64>>;

    fn from_roots(rs: &[Complex<f64>]) -> P {
        rs.iter()
            .fold(P::one(), |acc, r| &acc * &P::linear_factor(*r))
    }

    #[test]
    fn simple_roots_are_accurate() {
        let rs = [cx(1.0, 0.0), cx(-2.0, 0.5), cx(0.25, -3.0)];
        let found = roots(&from_roots(&rs)).unwrap();
        assert_eq!(found.len(), 3);
        for r in rs {
            assert!(found.iter().any(|c| (c.center - r).norm() < 1e-12));
        }
    }

    #[test]
    fn double_and_triple_roots_cluster() {
        let rs = [cx(1.0, 0.0), cx(1.0, 0.0), cx(-1.0, 2.0), cx(-1.0, 2.0), cx(-1.0, 2.0)];
        let found = roots(&from_roots(&rs)).unwrap();
        assert_eq!(found.len(), 2);
        let m: Vec<_> = found.iter().map(|c| c.multiplicity).collect();
        assert!(m.contains(&2) && m.contains(&3));
        for c in &found {
            assert!((c.center - cx(1.0, 0.0)).norm() < 1e-9 || (c.center - cx(-1.0, 2.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = P::new(vec![cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0)]);
        let found = roots(&p).unwrap();
        assert_eq!(found[0].center, cx(0.0, 0.0));
        assert_eq!(found[0].multiplicity, 2);
    }

    #[test]
    fn gcd_of_shared_factors() {
        let a = from_roots(&[cx(0.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)]);
        let b = from_roots(&[cx(1.0, 0.0), cx(3.0, 0.0), cx(0.0, 0.0)]);
        let g = approximate_gcd(&a, &b);
        let expect = from_roots(&[cx(0.0, 0.0), cx(1.0, 0.0)]);
        assert_eq!(g.degree(), Some(2));
        for (x, y) in g.coeffs().iter().zip(expect.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn valuation_counts_multiplicity() {
        let p = from_roots(&[cx(0.5, 0.5), cx(0.5, 0.5), cx(2.0, 0.0)]);
        assert_eq!(valuation_at(&p, &cx(0.5, 0.5)), 2);
        assert_eq!(valuation_at(&p, &cx(2.0, 0.0)), 1);
        assert_eq!(valuation_at(&p, &cx(0.0, 0.0)), 0);
    }

    #[test]
    fn single_precision_roots() {
        let p = Polynomial::<Complex<f32>>::new(vec![cx(2.0, 0.0), cx(-3.0, 0.0), cx(1.0, 0.0)]);
        let found = roots(&p).unwrap();
        assert_eq!(found.len(), 2);
        assert!((found[0].center - cx::<f32>(1.0, 0.0)).norm() < 1e-5);
    }
}
