//! Singular points, the Fuchs criterion and indicial exponents.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operator::DifferentialOperator;
use crate::poly::Polynomial;
use crate::roots::{cluster_points, cluster_tol, roots, valuation_at, RootCluster};
use crate::scalar::{abs, to_c64, Real};

pub type Operator<T> = DifferentialOperator<Complex<T>>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Location<T: Real> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> Location<T> {
    pub fn finite(&self) -> Option<Complex<T>> {
        match self {
            Location::Finite(z) => Some(*z),
            Location::Infinity => None,
        }
    }
}

impl<T: Real> fmt::Display for Location<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Finite(z) => {
                let z = to_c64(*z);
                write!(f, "{}{:+}i", z.re, z.im)
            }
            Location::Infinity => write!(f, "infinity"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Ordinary,
    RegularSingular,
    Irregular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint<T: Real> {
    pub location: Location<T>,
    pub kind: PointKind,
    /// Indicial roots with multiplicity; empty for irregular points.
    pub exponents: Vec<Complex<T>>,
    /// The same roots grouped into clusters.
    pub exponent_clusters: Vec<RootCluster<T>>,
}

impl<T: Real> SingularPoint<T> {
    pub fn is_regular(&self) -> bool {
        self.kind != PointKind::Irregular
    }
}

#[derive(Clone, Debug)]
pub struct SingularityProfile<T: Real> {
    pub operator: Operator<T>,
    /// Finite points ordered by (re, im), followed by the point at infinity.
    pub points: Vec<SingularPoint<T>>,
    /// Minimum pairwise distance among finite singular points.
    pub separation: Option<f64>,
}

impl<T: Real> SingularityProfile<T> {
    pub fn finite_points(&self) -> Vec<Complex<T>> {
        self.points
            .iter()
            .filter_map(|p| p.location.finite())
            .collect()
    }

    pub fn infinity(&self) -> &SingularPoint<T> {
        self.points
            .iter()
            .find(|p| p.location == Location::Infinity)
            .expect("infinity is always analyzed")
    }

    pub fn point_at(&self, z: Complex<T>) -> Option<&SingularPoint<T>> {
        let tol = cluster_tol::<T>();
        self.points.iter().find(|p| match p.location {
            Location::Finite(w) => abs(w - z) <= tol * 1.0f64.max(abs(z)),
            Location::Infinity => false,
        })
    }

    /// Default clearance: a tenth of the separation, or 0.1 with fewer than two points.
    pub fn default_clearance(&self) -> f64 {
        default_clearance(&self.finite_points())
    }
}

pub fn separation<T: Real>(points: &[Complex<T>]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = abs(*a - *b);
            best = Some(best.map_or(d, |x: f64| x.min(d)));
        }
    }
    best
}

pub fn default_clearance<T: Real>(points: &[Complex<T>]) -> f64 {
    0.1 * separation(points).unwrap_or(1.0)
}

/// Local data of `D` at a finite point `s`.
struct Local<T: Real> {
    kind: PointKind,
    /// Coefficients `b_i` of the indicial equation `Σ b_i ρ(ρ−1)…(ρ−i+1)`.
    indicial: Option<Vec<Complex<T>>>,
}

fn local_analysis<T: Real>(d: &Operator<T>, s: Complex<T>) -> Local<T> {
    let n = d.order();
    let lead = d.leading();
    let mut singular = false;
    let mut regular = true;
    let mut b = vec![Complex::zero(); n + 1];
    b[n] = Complex::one();
    for i in 0..n {
        let p = d.coeff(i);
        if p.is_zero() {
            continue;
        }
        // p_i / p_n = (N_i · D_n) / (D_i · N_n)
        let top = p.numerator() * lead.denominator();
        let bottom = p.denominator() * lead.numerator();
        let vt = valuation_at(&top, &s);
        let vb = valuation_at(&bottom, &s);
        let pole = vb as isize - vt as isize;
        if pole > 0 {
            singular = true;
        }
        if pole > (n - i) as isize {
            regular = false;
        } else if pole == (n - i) as isize {
            let ct = top.taylor_shift(&s).coeff(vt);
            let cb = bottom.taylor_shift(&s).coeff(vb);
            b[i] = ct / cb;
        }
    }
    let kind = if !regular {
        PointKind::Irregular
    } else if singular {
        PointKind::RegularSingular
    } else {
        PointKind::Ordinary
    };
    Local {
        kind,
        indicial: regular.then_some(b),
    }
}

/// Indicial polynomial in `ρ` from the coefficients `b_i`.
fn indicial_polynomial<T: Real>(b: &[Complex<T>]) -> Polynomial<Complex<T>> {
    let mut acc = Polynomial::zero();
    let mut falling = Polynomial::one();
    for (i, bi) in b.iter().enumerate() {
        if i > 0 {
            let shift = Complex::new(T::of((i - 1) as f64), T::zero());
            falling = &falling * &Polynomial::linear_factor(shift);
        }
        acc = &acc + &falling.scale(bi);
    }
    acc
}

fn exponents_from<T: Real>(b: &[Complex<T>]) -> Result<(Vec<Complex<T>>, Vec<RootCluster<T>>)> {
    let clusters = roots(&indicial_polynomial(b))?;
    let mut flat = Vec::new();
    for c in &clusters {
        flat.extend(std::iter::repeat_n(c.center, c.multiplicity));
    }
    Ok((flat, clusters))
}

fn analyze_point<T: Real>(d: &Operator<T>, location: Location<T>, s: Complex<T>) -> Result<SingularPoint<T>> {
    let local = local_analysis(d, s);
    let (exponents, exponent_clusters) = match &local.indicial {
        Some(b) => exponents_from(b)?,
        None => (Vec::new(), Vec::new()),
    };
    Ok(SingularPoint {
        location,
        kind: local.kind,
        exponents,
        exponent_clusters,
    })
}

/// Finite singular points and the point at infinity, each classified by the
/// Fuchs pole-order criterion.
pub fn singularities<T: Real>(d: &Operator<T>) -> Result<SingularityProfile<T>> {
    d.require_order(1)?;
    let n = d.order();
    let lead = d.leading();
    let mut candidates: Vec<Complex<T>> = Vec::new();
    let mut push_roots = |p: &Polynomial<Complex<T>>| -> Result<()> {
        if !p.is_constant() {
            candidates.extend(roots(p)?.into_iter().map(|c| c.center));
        }
        Ok(())
    };
    push_roots(lead.numerator())?;
    for i in 0..n {
        let q = d.coeff(i).try_div(lead)?;
        push_roots(q.denominator())?;
    }
    let merged = cluster_points(&candidates, cluster_tol::<T>());
    let mut points = Vec::with_capacity(merged.len() + 1);
    for c in merged {
        // zeros of p_n cancelled by every p_i are not singular
        let p = analyze_point(d, Location::Finite(c.center), c.center)?;
        if p.kind != PointKind::Ordinary {
            points.push(p);
        }
    }
    let finite: Vec<_> = points.iter().filter_map(|p| p.location.finite()).collect();
    let separation = separation(&finite);
    let at_infinity = d.pullback_to_infinity()?;
    points.push(analyze_point(&at_infinity, Location::Infinity, Complex::zero())?);
    Ok(SingularityProfile {
        operator: d.clone(),
        points,
        separation,
    })
}

/// Indicial exponents of `d` at `location`, with multiplicity. Ordinary
/// points give `{0, 1, …, n−1}`.
pub fn indicial_exponents<T: Real>(d: &Operator<T>, location: Location<T>) -> Result<Vec<Complex<T>>> {
    d.require_order(1)?;
    let point = match location {
        Location::Finite(s) => analyze_point(d, location, s)?,
        Location::Infinity => analyze_point(&d.pullback_to_infinity()?, location, Complex::zero())?,
    };
    if !point.is_regular() {
        return Err(Error::IrregularPoint {
            location: location.to_string(),
        });
    }
    Ok(point.exponents)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianReport<T: Real> {
    pub per_point: Vec<(Location<T>, bool)>,
    pub fuchsian: bool,
}

pub fn fuchsian_check<T: Real>(d: &Operator<T>) -> Result<FuchsianReport<T>> {
    let profile = singularities(d)?;
    Ok(fuchsian_report(&profile))
}

pub fn fuchsian_report<T: Real>(profile: &SingularityProfile<T>) -> FuchsianReport<T> {
    let per_point: Vec<_> = profile
        .points
        .iter()
        .map(|p| (p.location, p.is_regular()))
        .collect();
    let fuchsian = per_point.iter().all(|(_, ok)| *ok);
    FuchsianReport { per_point, fuchsian }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_operator;
    use crate::scalar::{cx, Coefficient};

    fn op(src: &str) -> Operator<f64> {
        parse_operator(src).unwrap().map(Complex::<f64>::from_exact)
    }

    fn close(a: &[Complex<f64>], b: &[(f64, f64)], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, &(re, im))| (x - cx(re, im)).norm() < tol)
    }

    #[test]
    fn derivation_has_no_finite_singularities() {
        let p = singularities(&op("D")).unwrap();
        assert!(p.finite_points().is_empty());
        assert_eq!(p.infinity().kind, PointKind::Ordinary);
        assert!(fuchsian_check(&op("D")).unwrap().fuchsian);
        // a vanishing leading coefficient alone does not make a point singular
        assert!(singularities(&op("t*D")).unwrap().finite_points().is_empty());
    }

    #[test]
    fn legendre_profile() {
        let l = op("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
        let p = singularities(&l).unwrap();
        let f = p.finite_points();
        assert_eq!(f.len(), 2);
        assert!((f[0] - cx(0.0, 0.0)).norm() < 1e-14 && (f[1] - cx(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(p.separation, Some(1.0));
        assert!(close(&p.points[0].exponents, &[(0.0, 0.0), (0.0, 0.0)], 1e-12));
        assert!(close(&p.points[1].exponents, &[(0.0, 0.0), (0.0, 0.0)], 1e-12));
        assert!(close(&p.infinity().exponents, &[(0.5, 0.0), (0.5, 0.0)], 1e-12));
        assert!(fuchsian_check(&l).unwrap().fuchsian);
    }

    #[test]
    fn airy_is_irregular_at_infinity() {
        let a = op("D^2 - t");
        let p = singularities(&a).unwrap();
        assert!(p.finite_points().is_empty());
        assert_eq!(p.infinity().kind, PointKind::Irregular);
        let report = fuchsian_check(&a).unwrap();
        assert!(!report.fuchsian);
        assert!(matches!(
            indicial_exponents(&a, Location::Infinity),
            Err(Error::IrregularPoint { .. })
        ));
    }

    #[test]
    fn euler_exponent() {
        let e = op("t*D - 1/3");
        let ex = indicial_exponents(&e, Location::Finite(cx(0.0, 0.0))).unwrap();
        assert!(close(&ex, &[(1.0 / 3.0, 0.0)], 1e-14));
        let inf = indicial_exponents(&e, Location::Infinity).unwrap();
        assert!(close(&inf, &[(-1.0 / 3.0, 0.0)], 1e-14));
    }

    #[test]
    fn ordinary_point_exponents() {
        let l = op("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
        let ex = indicial_exponents(&l, Location::Finite(cx(0.5, 0.5))).unwrap();
        assert!(close(&ex, &[(0.0, 0.0), (1.0, 0.0)], 1e-14));
    }

    #[test]
    fn order_zero_rejected() {
        assert!(matches!(
            singularities(&op("t + 1")),
            Err(Error::OrderTooLow { .. })
        ));
    }

    #[test]
    fn irregular_finite_point() {
        // t^2 D - 1 has a pole of order 2 > 1 at 0
        let p = singularities(&op("t^2*D - 1")).unwrap();
        assert_eq!(p.points[0].kind, PointKind::Irregular);
        assert!(p.points[0].exponents.is_empty());
    }
}
