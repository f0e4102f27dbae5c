//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::scalar::{abs, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

pub fn norm<T: Real>(m: &CMatrix<T>) -> f64 {
    m.norm().to_f64().unwrap_or(f64::NAN)
}

pub fn vnorm<T: Real>(v: &CVector<T>) -> f64 {
    v.norm().to_f64().unwrap_or(f64::NAN)
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

/// `‖a − b‖` in the Frobenius norm.
pub fn distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> f64 {
    norm(&(a - b))
}

pub fn inverse<T: Real>(m: &CMatrix<T>) -> Option<CMatrix<T>> {
    m.clone().try_inverse()
}

pub fn determinant<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.clone().lu().determinant()
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.trace()
}

/// Condition number estimate `‖m‖·‖m⁻¹‖`; infinite for singular matrices.
pub fn condition<T: Real>(m: &CMatrix<T>) -> f64 {
    inverse(m).map_or(f64::INFINITY, |inv| norm(m) * norm(&inv))
}

/// Minimum-norm least-squares solution of `a·x = b`, treating singular values
/// below `rank_tol·σ_max` as zero.
pub fn lstsq_min_norm<T: Real>(a: &CMatrix<T>, b: &CVector<T>, rank_tol: f64) -> CVector<T> {
    let n = a.ncols();
    if a.nrows() == 0 || n == 0 {
        return CVector::zeros(n);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, s| m.max(s.to_f64().unwrap_or(0.0)));
    if smax == 0.0 {
        return CVector::zeros(n);
    }
    let cutoff = T::of(rank_tol * smax);
    svd.solve(b, cutoff).unwrap_or_else(|_| CVector::zeros(n))
}

/// Orthonormal basis of the approximate null space of `a`: right singular
/// vectors whose singular values are at most `tol·max(1, σ_max)`.
pub fn null_space<T: Real>(a: &CMatrix<T>, tol: f64) -> Vec<CVector<T>> {
    let n = a.ncols();
    // pad to a square matrix so the SVD returns a full set of right vectors
    let rows = a.nrows().max(n);
    let mut padded = CMatrix::<T>::zeros(rows, n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let sv: Vec<f64> = svd.singular_values.iter().map(|s| s.to_f64().unwrap_or(0.0)).collect();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol * smax.max(1.0);
    (0..sv.len())
        .filter(|&i| sv[i] <= cutoff)
        .map(|i| v_t.row(i).adjoint())
        .collect()
}

/// Greedy matching distance between two multisets of complex numbers of
/// equal size: the largest distance over an optimal-ish pairing.
pub fn multiset_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    if a.len() <= 6 {
        return best_permutation(a, b);
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, abs(*x - *y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("sizes agree");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn best_permutation<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> f64 {
    fn go<T: Real>(a: &[Complex<T>], b: &[Complex<T>], used: &mut Vec<bool>, i: usize, cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if i == a.len() {
            *best = cur;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(a, b, used, i + 1, cur.max(abs(a[i] - b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
    if a.is_empty() {
        0.0
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn min_norm_solution_of_rank_deficient_system() {
        let a = CMatrix::<f64>::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0)]);
        let b = CVector::from_vec(vec![cx(2.0, 0.0), cx(2.0, 0.0)]);
        let x = lstsq_min_norm(&a, &b, 1e-9);
        assert!((x[0] - cx(1.0, 0.0)).norm() < 1e-12 && (x[1] - cx(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_projector() {
        let a = CMatrix::<f64>::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]);
        let ns = null_space(&a, 1e-9);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multiset_matching_ignores_order() {
        let a = [cx::<f64>(1.0, 0.0), cx(0.0, 1.0), cx(-1.0, 0.0)];
        let b = [cx::<f64>(-1.0, 0.0), cx(1.0, 0.0), cx(0.0, 1.0)];
        assert!(multiset_distance(&a, &b) < 1e-15);
        assert_eq!(multiset_distance(&a, &b[..2]), f64::INFINITY);
    }
}
