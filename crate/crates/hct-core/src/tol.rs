//! Central numerical tolerances.
//!
//! Every check in the crate pins its threshold here rather than inlining a
//! magic number. The hierarchy reflects how much floating-point work sits
//! between the input and the checked identity: direct factorizations get
//! 1e-12, single solve/SVD compositions 1e-10, and stacked compositions of
//! three or four solves 1e-9.

/// Relative reconstruction residual for a Cholesky factor, `‖LLᵀ − G‖_F ≤ tol·‖G‖_F`.
pub const GRAM_RECONSTRUCTION: f64 = 1e-12;

/// Relative symmetry defect accepted before a matrix is rejected as non-symmetric.
pub const SYMMETRY: f64 = 1e-12;

/// Gram-orthonormality defect of computed bases, `‖BᵀGB − I‖ ≤ tol`.
pub const ORTHONORMALITY: f64 = 1e-10;

/// Projector algebra residuals: idempotency, self-adjointness, pairwise products.
pub const PROJECTOR: f64 = 1e-10;

/// Adjoint pairing identity `⟨Ax,y⟩ = ⟨x,A*y⟩`, relative.
pub const ADJOINT_PAIRING: f64 = 1e-10;

/// Double adjoint `(A*)* = A`, relative.
pub const DOUBLE_ADJOINT: f64 = 1e-12;

/// Complex property `‖A1·A0‖ ≤ tol·‖A1‖·‖A0‖` in weighted operator norms.
pub const COMPLEX_PROPERTY: f64 = 1e-10;

/// Weighted SVD reconstruction `A = U·Σ·Vᵀ·G0`, relative.
pub const SVD_RECONSTRUCTION: f64 = 1e-10;

/// Equality of best constants `c_A = c_{A*}`, relative.
pub const BEST_CONSTANT_EQUALITY: f64 = 1e-10;

/// Element-level Helmholtz reconstruction `x = x_R + x_H + x_Rstar`, relative.
pub const DECOMPOSE_RECONSTRUCTION: f64 = 1e-12;

/// Mutual Gram inner products of Helmholtz components, relative to `‖x‖²`.
pub const DECOMPOSE_ORTHOGONALITY: f64 = 1e-10;

/// Regular decomposition identity `Q1 + A0·Q0 = I` and potential identity `A1·P = id`.
pub const DECOMPOSITION_IDENTITY: f64 = 1e-10;

/// Projector residuals for decomposition operators built from 3–4 chained solves.
pub const DECOMPOSITION_PROJECTOR: f64 = 1e-9;

/// Pairing identity of the compactness proof, relative to `‖x‖²`.
pub const PAIRING_IDENTITY: f64 = 1e-9;

/// Combined estimate margin in the mini-FAT report: margins must be `≥ −tol`.
pub const COMBINED_MARGIN: f64 = 1e-9;

/// Relative deviation allowed when the Dirichlet Poincaré constant is
/// compared against its analytic limit on the finest study mesh.
pub const POINCARE_TARGET_REL: f64 = 0.02;

/// Gram condition estimate above which a warning is logged.
pub const GRAM_CONDITION_WARN: f64 = 1e12;

/// Default multiplier in the rank cutoff `tol_factor · σ_max · ε_machine · max(rows, cols)`.
pub const DEFAULT_TOL_FACTOR: f64 = 100.0;

/// Hard cap on dense space dimension; larger requests are rejected instead
/// of silently thrashing.
pub const DENSE_SIZE_GUARD: usize = 20_000;

/// Smallest admissible weight eigenvalue.
pub const WEIGHT_POSITIVITY: f64 = 1e-12;

/// Sample counts for randomized identity checks.
pub const MINI_FAT_SAMPLES: usize = 100;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hierarchy_is_ordered() {
        assert!(GRAM_RECONSTRUCTION <= SVD_RECONSTRUCTION);
        assert!(SVD_RECONSTRUCTION <= DECOMPOSITION_PROJECTOR);
        assert!(DECOMPOSE_RECONSTRUCTION <= DECOMPOSE_ORTHOGONALITY);
        assert!(PROJECTOR <= DECOMPOSITION_PROJECTOR);
    }
}
