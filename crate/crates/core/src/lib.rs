//! Monodromy and extension classes of Fuchsian linear differential
//! equations `D h = g` with rational coefficients.
//!
//! Numerical code is generic over the real scalar `T` (`f32` or `f64`) and
//! works with `Complex<T>`; input is parsed exactly over the complex
//! rationals and converted once. The aliases below fix the common choices.
//!
//! ```
//! use pfext::{analyze_monodromy, parse_operator_as, BasePoint, ContinuationConfig};
//!
//! let d = parse_operator_as::<f64>("t*D - 1/2").unwrap();
//! let (_, rep) = analyze_monodromy(&d, BasePoint::Auto, &ContinuationConfig::default()).unwrap();
//! assert!((rep.matrices[0][(0, 0)].re + 1.0).abs() < 1e-10);
//! ```

pub mod config;
pub mod continuation;
pub mod error;
pub mod extension;
pub mod linalg;
pub mod monodromy;
pub mod operator;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod scalar;
pub mod singular;

use num_complex::Complex;

pub use config::{ContinuationConfig, Tolerances};
pub use continuation::{companion_system, transfer, transport_jet, CompanionSystem, JetVector, PathPolyline, TransferResult};
pub use error::{Error, Result};
pub use extension::{
    analyze_extension, class_equal, cocycle_by_block, cocycle_by_continuation, extended_operator, is_coboundary,
    shift_by_coboundary, Cocycle, ExtensionClass, InhomogeneousProblem, Verdict,
};
pub use monodromy::{
    admissibility_check, analyze_monodromy, generator_loops, local_consistency_check, monodromy_representation, BasePoint,
    LoopPlan, MonodromyRepresentation,
};
pub use operator::{normalize, DifferentialOperator};
pub use parse::{parse_constant, parse_constant_as, parse_operator, parse_operator_as, parse_rational, parse_rational_as};
pub use poly::Polynomial;
pub use rational::RationalFunction;
pub use scalar::{ExactComplex, Real};
pub use singular::{fuchsian_check, indicial_exponents, singularities, Location, Operator, SingularityProfile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Complex64 = Complex<f64>;
pub type Complex32 = Complex<f32>;

pub type ExactPolynomial = Polynomial<ExactComplex>;
pub type ExactRationalFunction = RationalFunction<ExactComplex>;
pub type ExactOperator = DifferentialOperator<ExactComplex>;

pub type Polynomial64 = Polynomial<Complex64>;
pub type RationalFunction64 = RationalFunction<Complex64>;
pub type Operator64 = Operator<f64>;
pub type PathPolyline64 = PathPolyline<f64>;
pub type CompanionSystem64 = CompanionSystem<f64>;
pub type MonodromyRepresentation64 = MonodromyRepresentation<f64>;
pub type Cocycle64 = Cocycle<f64>;
pub type InhomogeneousProblem64 = InhomogeneousProblem<f64>;

pub type Polynomial32 = Polynomial<Complex32>;
pub type RationalFunction32 = RationalFunction<Complex32>;
pub type Operator32 = Operator<f32>;
pub type MonodromyRepresentation32 = MonodromyRepresentation<f32>;
