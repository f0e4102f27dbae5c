//! Checks against values computed independently of the library: quadrature
//! of contour integrals, classical hypergeometric exponent tables, and
//! power series solutions.

use std::f64::consts::PI;

use num_complex::Complex64;
use pfext::extension::relation_check;
use pfext::linalg;
use pfext::monodromy::infinity_direct_check;
use pfext::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
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

/// `∫ f dt` along a polyline, each segment split into `pieces` panels.
fn path_integral(vertices: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let rule = gauss_legendre(20);
    let pieces = 8;
    let mut total = c(0.0, 0.0);
    for w in vertices.windows(2) {
        for k in 0..pieces {
            let a = w[0] + (w[1] - w[0]) * (k as f64 / pieces as f64);
            let b = w[0] + (w[1] - w[0]) * ((k + 1) as f64 / pieces as f64);
            let half = (b - a) * 0.5;
            let mid = (a + b) * 0.5;
            for &(x, wt) in &rule {
                total += half * wt * f(mid + half * x);
            }
        }
    }
    total
}

#[test]
fn quadrature_oracle_is_sane() {
    let square = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)];
    let v = path_integral(&square, |t| t * t);
    assert!(v.norm() < 1e-14);
    let v = path_integral(&square, |t| 1.0 / t);
    assert!((v - c(0.0, 2.0 * PI)).norm() < 1e-13);
}

#[test]
fn log_cocycle_matches_contour_integral() {
    let p = InhomogeneousProblem::new(parse_operator_as("D").unwrap(), parse_rational_as("1/t").unwrap(), None).unwrap();
    let a = analyze_extension(&p, BasePoint::At(c(1.0, 0.0)), &ContinuationConfig::default(), &Tolerances::default()).unwrap();
    let path = &a.representation.plan.loops[0].path;
    let oracle = path_integral(path.vertices(), |t| 1.0 / t);
    assert!((oracle - c(0.0, 2.0 * PI)).norm() < 1e-12);
    assert!((a.continuation.vectors[0][0] - oracle).norm() < 1e-9);
    assert!((a.block.cocycle.vectors[0][0] - oracle).norm() < 1e-9);
    // block matrix [[1, 2πi], [0, 1]]
    let b = &a.block.matrices[0];
    assert!((b[(0, 0)] - c(1.0, 0.0)).norm() < 1e-9 && b[(1, 0)].norm() < 1e-9 && (b[(1, 1)] - c(1.0, 0.0)).norm() < 1e-9);
    assert_eq!(a.class.verdict, Verdict::Nontrivial);
}

#[test]
fn jet_transport_matches_contour_integral() {
    let sys = companion_system(&parse_operator_as::<f64>("D").unwrap(), Some(&parse_rational_as("1/t").unwrap())).unwrap();
    let plan = generator_loops(&[c(0.0, 0.0)], BasePoint::At(c(1.0, 0.0)), None).unwrap();
    let path = &plan.loops[0].path;
    let jet = transport_jet(&sys, path, &JetVector::zero(c(1.0, 0.0), 1), &ContinuationConfig::default()).unwrap();
    let oracle = path_integral(path.vertices(), |t| 1.0 / t);
    assert!((jet.values[0] - oracle).norm() < 1e-12);
}

/// `t(1−t)D² + (c − (a+b+1)t)D − ab` with rational parameters.
fn hypergeometric(a: (i64, i64), b: (i64, i64), cc: (i64, i64)) -> String {
    let (an, ad) = a;
    let (bn, bd) = b;
    let (cn, cd) = cc;
    format!("t*(1-t)*D^2 + ({cn}/{cd} - ({an}/{ad} + {bn}/{bd} + 1)*t)*D - ({an}/{ad})*({bn}/{bd})")
}

fn close_multiset(a: &[Complex64], b: &[f64], tol: f64) -> bool {
    let b: Vec<Complex64> = b.iter().map(|x| c(*x, 0.0)).collect();
    linalg::multiset_distance(a, &b) < tol
}

#[test]
fn hypergeometric_exponent_table() {
    // exponents {0, 1−c} at 0, {0, c−a−b} at 1, {a, b} at infinity
    let params = [
        ((1, 2), (1, 2), (1, 1)),
        ((1, 3), (2, 5), (3, 4)),
        ((-1, 2), (1, 7), (5, 3)),
        ((2, 1), (3, 2), (1, 5)),
    ];
    for (a, b, cc) in params {
        let d = parse_operator_as::<f64>(&hypergeometric(a, b, cc)).unwrap();
        let (af, bf, cf) = (a.0 as f64 / a.1 as f64, b.0 as f64 / b.1 as f64, cc.0 as f64 / cc.1 as f64);
        let profile = singularities(&d).unwrap();
        let at = |z: Location<f64>| indicial_exponents(&d, z).unwrap();
        assert!(close_multiset(&at(Location::Finite(c(0.0, 0.0))), &[0.0, 1.0 - cf], 1e-9));
        assert!(close_multiset(&at(Location::Finite(c(1.0, 0.0))), &[0.0, cf - af - bf], 1e-9));
        assert!(close_multiset(&profile.infinity().exponents, &[af, bf], 1e-9));
        assert!(fuchsian_check(&d).unwrap().fuchsian);
    }
}

#[test]
fn legendre_profile() {
    let d = parse_operator_as::<f64>("t*(1-t)*D^2 + (1-2*t)*D - 1/4").unwrap();
    let profile = singularities(&d).unwrap();
    let finite = profile.finite_points();
    assert_eq!(finite.len(), 2);
    assert!((finite[0] - c(0.0, 0.0)).norm() < 1e-12 && (finite[1] - c(1.0, 0.0)).norm() < 1e-12);
    for p in &profile.points[..2] {
        assert!(close_multiset(&p.exponents, &[0.0, 0.0], 1e-7));
    }
    assert!(close_multiset(&profile.infinity().exponents, &[0.5, 0.5], 1e-7));
}

/// Value and derivative of 2F1(a, b; c; t) by its power series.
fn hypergeometric_series(a: f64, b: f64, cc: f64, t: Complex64) -> (Complex64, Complex64) {
    let mut term = c(1.0, 0.0);
    let mut coeff = 1.0;
    let mut f = c(0.0, 0.0);
    let mut df = c(0.0, 0.0);
    let mut tk = c(1.0, 0.0);
    for k in 0..2000 {
        let kf = k as f64;
        f += tk * coeff;
        if k > 0 {
            df += term * coeff * kf;
        }
        term = tk;
        tk *= t;
        coeff *= (a + kf) * (b + kf) / ((cc + kf) * (1.0 + kf));
        if coeff.abs() * tk.norm() < 1e-18 {
            break;
        }
    }
    (f, df)
}

#[test]
fn continuation_reproduces_hypergeometric_series() {
    let d = parse_operator_as::<f64>(&hypergeometric((1, 2), (1, 2), (1, 1))).unwrap();
    let sys = companion_system(&d, None).unwrap();
    let (t0, t1) = (c(0.2, 0.0), c(0.45, 0.35));
    let (f0, df0) = hypergeometric_series(0.5, 0.5, 1.0, t0);
    let (f1, df1) = hypergeometric_series(0.5, 0.5, 1.0, t1);
    let path = PathPolyline::new(vec![t0, c(0.3, 0.3), t1]).unwrap();
    let jet = transport_jet(&sys, &path, &JetVector::new(t0, vec![f0, df0]), &ContinuationConfig::default()).unwrap();
    assert!((jet.values[0] - f1).norm() < 1e-12, "{} vs {}", jet.values[0], f1);
    assert!((jet.values[1] - df1).norm() < 1e-11);
}

#[test]
fn legendre_monodromy_matches_classical_values() {
    let d = parse_operator_as::<f64>("t*(1-t)*D^2 + (1-2*t)*D - 1/4").unwrap();
    let cfg = ContinuationConfig::default();
    let tol = Tolerances::default();
    let (profile, rep) = analyze_monodromy(&d, BasePoint::Auto, &cfg).unwrap();
    let id = linalg::identity::<f64>(2);
    for m in &rep.matrices {
        assert!((linalg::trace(m) - c(2.0, 0.0)).norm() < 1e-7);
        let nil = m - &id;
        assert!(linalg::norm(&(&nil * &nil)) < 1e-7);
        // logarithmic solutions: the monodromy is not the identity
        assert!(linalg::norm(&nil) > 0.1);
    }
    // exponents {1/2, 1/2} at infinity give the eigenvalue −1 twice
    assert!((linalg::trace(&rep.infinity) - c(-2.0, 0.0)).norm() < 1e-7);
    assert!(rep.relation_residual() < 1e-8);
    assert!(local_consistency_check(&rep, &profile, &tol).unwrap().pass);
    assert!(infinity_direct_check(&d, &rep, &cfg, &tol).unwrap().pass);
}

#[test]
fn wronskian_follows_abel_formula() {
    let cases = [
        "t*(1-t)*D^2 + (1-2*t)*D - 1/4",
        "t*(1-t)*D^2 + (3/4 - (1/3 + 2/5 + 1)*t)*D - 2/15",
        "t^2*D^2 + t*D - 1/9",
        "t*(t-1)*(t+1)*D^3 + 3*t^2*D^2 + t*D - 1/5",
    ];
    let cfg = ContinuationConfig::default();
    for src in cases {
        let d = parse_operator_as::<f64>(src).unwrap();
        let n = d.order();
        let ratio = d.coeff(n - 1).try_div(d.leading()).unwrap();
        let sys = companion_system(&d, None).unwrap();
        let (_, rep) = analyze_monodromy(&d, BasePoint::Auto, &cfg).unwrap();
        let loop_cfg = ContinuationConfig {
            clearance: Some(rep.plan.clearance),
            ..cfg.clone()
        };
        let paths = rep.plan.loops.iter().map(|l| l.path.clone()).chain(rep.plan.infinity_loop.clone());
        for path in paths {
            let t = transfer(&sys, &path, &loop_cfg).unwrap();
            let integral = path_integral(path.vertices(), |z| ratio.eval(&z).unwrap());
            let abel = (-integral).exp();
            let det = linalg::determinant(&t.matrix);
            assert!((det - abel).norm() < 1e-8 * abel.norm().max(1.0), "{src}: {det} vs {abel}");
        }
    }
}

#[test]
fn legendre_with_constant_inhomogeneity_relation_word() {
    let p = InhomogeneousProblem::new(
        parse_operator_as::<f64>("t*(1-t)*D^2 + (1-2*t)*D - 1/4").unwrap(),
        parse_rational_as("1").unwrap(),
        Some(1),
    )
    .unwrap();
    let cfg = ContinuationConfig::default();
    let a = analyze_extension(&p, BasePoint::Auto, &cfg, &Tolerances::default()).unwrap();
    assert!(a.agreement.pass);
    assert_eq!(a.class.twist, Some(1));
    let rel = relation_check(&p, &a.representation, &a.continuation, &cfg).unwrap();
    assert!(rel.residual < 1e-9 && rel.residual <= 10.0 * rel.bound);
    // the loop around infinity agrees with the product relation
    assert!(linalg::distance(&rel.infinity_matrix, &a.representation.infinity) < 1e-8);
}
