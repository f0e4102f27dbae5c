//! Independent reference computations: composite Gauss-Legendre quadrature
//! along polylines and the Abel formula for Wronskians.

use std::f64::consts::PI;

use pfext::continuation::segment_distance;
use pfext::roots::roots;
use pfext::{Complex64, Operator64};

use crate::exit::Failure;

const NODES: usize = 20;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫ f dt` along the polyline. Each segment is split into panels short
/// compared with its distance to the nearest pole.
pub fn contour_integral(f: impl Fn(Complex64) -> Complex64, vertices: &[Complex64], poles: &[Complex64]) -> Complex64 {
    let rule = gauss_legendre(NODES);
    let mut total = Complex64::new(0.0, 0.0);
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = (b - a).norm();
        let dist = poles.iter().map(|p| segment_distance(a, b, *p)).fold(f64::INFINITY, f64::min);
        let panels = if dist.is_finite() { (4.0 * len / dist).ceil().max(1.0) as usize } else { 4 };
        for k in 0..panels {
            let lo = a + (b - a) * (k as f64 / panels as f64);
            let hi = a + (b - a) * ((k + 1) as f64 / panels as f64);
            let (mid, half) = ((lo + hi) * 0.5, (hi - lo) * 0.5);
            for (x, wt) in &rule {
                total += f(mid + half * *x) * half * *wt;
            }
        }
    }
    total
}

/// `exp(−∫ p_{n−1}/p_n dt)` along the polyline: the determinant of the
/// transfer matrix of the companion system.
pub fn abel_wronskian(d: &Operator64, vertices: &[Complex64]) -> Result<Complex64, Failure> {
    let n = d.order();
    let ratio = d.coeff(n - 1).try_div(d.leading())?;
    if ratio.is_zero() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let poles: Vec<Complex64> = roots(ratio.denominator())?.into_iter().map(|c| c.center).collect();
    let integral = contour_integral(|t| ratio.eval(&t).unwrap_or(Complex64::new(f64::NAN, 0.0)), vertices, &poles);
    Ok((-integral).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(center: Complex64, r: f64, sides: usize) -> Vec<Complex64> {
        (0..=sides).map(|k| center + Complex64::from_polar(r, 2.0 * PI * k as f64 / sides as f64)).collect()
    }

    #[test]
    fn weights_integrate_polynomials() {
        let rule = gauss_legendre(NODES);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x38: f64 = rule.iter().map(|(x, w)| w * x.powi(38)).sum();
        assert!((x38 - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn residue_of_simple_pole() {
        let z0 = Complex64::new(0.3, -0.2);
        let v = polygon(z0, 0.7, 16);
        let i = contour_integral(|t| 1.0 / (t - z0), &v, &[z0]);
        assert!((i - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-13);
        let outside = contour_integral(|t| 1.0 / (t - 3.0), &v, &[Complex64::new(3.0, 0.0)]);
        assert!(outside.norm() < 1e-13);
    }

    #[test]
    fn euler_wronskian_around_origin() {
        let d = pfext::parse_operator_as::<f64>("t^2*D^2 + t*D - 1/9").unwrap();
        // p_1/p_2 = 1/t, so the determinant around the origin is exp(−2πi) = 1
        let w = abel_wronskian(&d, &polygon(Complex64::new(0.0, 0.0), 1.0, 16)).unwrap();
        assert!((w - 1.0).norm() < 1e-12);
    }
}
