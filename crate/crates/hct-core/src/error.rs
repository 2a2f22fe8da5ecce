//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric (relative defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("shape mismatch in {context}: expected {expected:?}, got {found:?}")]
    ShapeMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("basis columns are not Gram-orthonormal (defect {defect:.3e})")]
    BasisNotOrthonormal { defect: f64 },

    #[error("complex property violated: ‖A1·A0‖ = {residual:.3e} exceeds {tolerance:.3e}")]
    ComplexPropertyViolated { residual: f64, tolerance: f64 },

    #[error("operator has no reduced part (zero operator)")]
    NoReducedPart,

    #[error("complex is not exact: cohomology dimension {cohomology_dim} > 0")]
    NotExact { cohomology_dim: usize },

    #[error("regular decomposition residual {residual:.3e} exceeds {tolerance:.3e}")]
    DecompositionResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("vector does not match the claimed decomposition (residual {residual:.3e})")]
    DecompositionMismatch { residual: f64 },

    #[error("candidate family is not a pre-basis: harmonic projections have rank {rank}, need {expected}")]
    NotAPreBasis { rank: usize, expected: usize },

    #[error("harmonic space cross-check failed: stacked-kernel dim {stacked} vs Hodge-kernel dim {hodge}")]
    HarmonicCrossCheck { stacked: usize, hodge: usize },

    #[error("mesh is not manifold-like: facet {facet:?} is shared by {count} cells")]
    NonManifold { facet: Vec<usize>, count: usize },

    #[error("cell {cell:?} has non-positive volume")]
    InvertedCell { cell: Vec<usize> },

    #[error("duplicate cell {cell:?}")]
    DuplicateCell { cell: Vec<usize> },

    #[error("degenerate diagonal (DEC) mass at degree {degree}: entry {index} = {value:.3e}")]
    NonSpdMass {
        degree: usize,
        index: usize,
        value: f64,
    },

    #[error("operation requires ambient dimension {expected}, mesh has {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("unknown mesh generator `{0}`")]
    UnknownGenerator(String),

    #[error("bad generator parameters: {0}")]
    BadParams(String),

    #[error("dense request of dimension {dim} exceeds the size guard {limit}")]
    SizeGuard { dim: usize, limit: usize },

    #[error("invalid degree {degree} for a complex of top dimension {top}")]
    InvalidDegree { degree: usize, top: usize },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("LAPACK backend failure: {0}")]
    Backend(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}
