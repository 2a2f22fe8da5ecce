//! Finite-dimensional inner-product spaces and subspace bases.

use std::sync::Arc;

use ndarray::prelude::*;

use crate::error::Error;
use crate::numeric::{self, GramFactor};
use crate::tol;
use crate::Result;

/// A finite-dimensional Hilbert space: a dimension together with an SPD
/// Gram matrix defining `⟨x, y⟩ = xᵀGy`. The Cholesky factor is computed
/// once at construction and shared by every downstream operation.
#[derive(Debug)]
pub struct InnerProductSpace {
    dim: usize,
    gram: Array2<f64>,
    factor: GramFactor,
    label: String,
}

/// Shared handle to a space. Spaces are immutable after construction, so
/// cloning the handle is cheap and thread-safe.
pub type Space = Arc<InnerProductSpace>;

impl InnerProductSpace {
    /// Space with an explicit SPD Gram matrix.
    pub fn from_gram(gram: Array2<f64>, label: impl Into<String>) -> Result<Space> {
        let factor = numeric::cholesky_whiten(&gram.view())?;
        Ok(Arc::new(InnerProductSpace {
            dim: gram.nrows(),
            gram,
            factor,
            label: label.into(),
        }))
    }

    /// Euclidean space (identity Gram).
    pub fn standard(dim: usize, label: impl Into<String>) -> Result<Space> {
        Self::from_gram(Array2::eye(dim), label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Array2<f64> {
        &self.gram
    }

    pub fn factor(&self) -> &GramFactor {
        &self.factor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn inner(&self, x: &Array1<f64>, y: &Array1<f64>) -> f64 {
        x.dot(&self.gram.dot(y))
    }

    pub fn norm(&self, x: &Array1<f64>) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// Product space `(H_a × H_b, G_a ⊕ G_b)`.
    pub fn product(a: &Space, b: &Space, label: impl Into<String>) -> Result<Space> {
        let n = a.dim() + b.dim();
        let mut gram = Array2::zeros((n, n));
        gram.slice_mut(s![..a.dim(), ..a.dim()]).assign(a.gram());
        gram.slice_mut(s![a.dim().., a.dim()..]).assign(b.gram());
        Self::from_gram(gram, label)
    }
}

/// What a subspace basis represents; purely informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Kernel,
    Range,
    Cohomology,
    Prebasis,
    Other,
}

/// Gram-orthonormal column basis of a subspace: `columnsᵀ·G·columns = I`.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    space: Space,
    columns: Array2<f64>,
    kind: BasisKind,
}

impl SubspaceBasis {
    /// Validates Gram-orthonormality within [`tol::ORTHONORMALITY`].
    pub fn new(space: Space, columns: Array2<f64>, kind: BasisKind) -> Result<Self> {
        if columns.nrows() != space.dim() {
            return Err(Error::ShapeMismatch {
                context: "SubspaceBasis::new",
                expected: (space.dim(), columns.ncols()),
                found: columns.dim(),
            });
        }
        let k = columns.ncols();
        if k > 0 {
            let product = columns.t().dot(space.gram()).dot(&columns);
            let defect = numeric::frob(&(&product - &Array2::eye(k)).view());
            if defect > tol::ORTHONORMALITY {
                return Err(Error::BasisNotOrthonormal { defect });
            }
        }
        Ok(SubspaceBasis {
            space,
            columns,
            kind,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn columns(&self) -> &Array2<f64> {
        &self.columns
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Number of basis vectors.
    pub fn count(&self) -> usize {
        self.columns.ncols()
    }

    /// Coordinates of `x` with respect to this basis, `Bᵀ·G·x`.
    pub fn coordinates(&self, x: &Array1<f64>) -> Array1<f64> {
        self.columns.t().dot(&self.space.gram().dot(x))
    }

    /// G-orthogonal projection of `x` onto the span.
    pub fn project(&self, x: &Array1<f64>) -> Array1<f64> {
        self.columns.dot(&self.coordinates(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_spd_gram() {
        let g = array![[0.0, 0.0], [0.0, 1.0]];
        assert!(InnerProductSpace::from_gram(g, "bad").is_err());
    }

    #[test]
    fn zero_dimensional_space_is_fine() {
        let sp = InnerProductSpace::standard(0, "trivial").unwrap();
        assert_eq!(sp.dim(), 0);
    }

    #[test]
    fn weighted_norm() {
        let sp = InnerProductSpace::from_gram(Array2::from_diag(&array![4.0, 1.0]), "w").unwrap();
        let x = array![1.0, 2.0];
        assert!((sp.norm(&x) - (4.0 + 4.0f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn product_space_blocks() {
        let a = InnerProductSpace::from_gram(Array2::from_diag(&array![2.0]), "a").unwrap();
        let b = InnerProductSpace::standard(2, "b").unwrap();
        let p = InnerProductSpace::product(&a, &b, "a×b").unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.gram()[[0, 0]], 2.0);
        assert_eq!(p.gram()[[1, 1]], 1.0);
        assert_eq!(p.gram()[[0, 1]], 0.0);
    }
}
