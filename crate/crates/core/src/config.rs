//! Numerical settings. Every report records the values it was produced with.

/// Settings for Taylor-series continuation.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationConfig {
    /// Step radius as a fraction of the distance to the nearest singularity.
    pub theta: f64,
    /// Series order tried first at every step.
    pub min_order: usize,
    /// Largest series order before the step is shortened.
    pub max_order: usize,
    /// Relative tail bound a step must meet.
    pub precision_target: f64,
    /// Minimum distance between paths and singular points. `None` means a
    /// tenth of the singularity separation.
    pub clearance: Option<f64>,
    /// Every step is shortened by this factor; used for refinement checks.
    pub subdivision: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self {
            theta: 0.4,
            min_order: 24,
            max_order: 64,
            precision_target: 1e-16,
            clearance: None,
            subdivision: 1,
        }
    }
}

impl ContinuationConfig {
    pub fn with_subdivision(&self, subdivision: usize) -> Self {
        Self {
            subdivision,
            ..self.clone()
        }
    }
}

/// Decision thresholds for monodromy and extension checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Bound on `‖(M − I)^n‖` for unipotency.
    pub unipotent: f64,
    /// Residual below which a vector counts as a common eigenvector, and the
    /// relative singular-value cutoff in the Burnside span.
    pub irreducible: f64,
    /// Relative residual below which a cocycle is a coboundary.
    pub class: f64,
    /// Distance allowed between monodromy eigenvalues and `exp(2πiρ)`.
    pub eigenvalue: f64,
    /// Bound on the deviation of block monodromy bottom rows from `(0,…,0,1)`.
    pub bottom_row: f64,
    /// Relative singular-value cutoff for least-squares rank decisions.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unipotent: 1e-7,
            irreducible: 1e-7,
            class: 1e-6,
            eigenvalue: 1e-6,
            bottom_row: 1e-7,
            rank: 1e-9,
        }
    }
}
