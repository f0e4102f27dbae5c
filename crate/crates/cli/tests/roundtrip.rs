use pfext::linalg::CMatrix;
use pfext::Complex64;
use pfext_cli::problem::{Numerics, ToleranceOverrides};
use pfext_cli::report::{from_matrix, matrix};
use pfext_cli::ProblemFile;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::ZERO
}

proptest! {
    #[test]
    fn matrices_survive_json(rows in 1usize..4, cols in 1usize..4, entries in prop::collection::vec((finite(), finite()), 16)) {
        let m = CMatrix::<f64>::from_fn(rows, cols, |i, j| {
            let (re, im) = entries[i * 4 + j];
            Complex64::new(re, im)
        });
        let json = serde_json::to_string(&matrix(&m)).unwrap();
        let back = from_matrix(&serde_json::from_str(&json).unwrap());
        prop_assert_eq!(back, m);
    }

    #[test]
    fn resolved_problems_survive_toml(
        theta in 0.05f64..0.9,
        order in 8usize..80,
        target in 1e-16f64..1e-6,
        clearance in prop::option::of(1e-3f64..1.0),
        seed in any::<u64>(),
        class in 1e-12f64..1e-3,
        jet in prop::option::of(prop::collection::vec("-?[0-9]{1,2}/[1-9]", 1..3)),
    ) {
        let p = ProblemFile {
            name: "p".into(),
            operator: "t*D - 1/3".into(),
            inhomogeneity: Some("1/(t-2)".into()),
            initial_jet: jet,
            numerics: Numerics {
                theta: Some(theta),
                taylor_order: Some(order),
                precision_target: Some(target),
                clearance,
                seed: Some(seed),
            },
            tolerances: ToleranceOverrides { class: Some(class), ..Default::default() },
            ..Default::default()
        }
        .resolved();
        let back = ProblemFile::from_toml(&toml::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back.config(), p.config());
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.resolved(), p);
    }
}
