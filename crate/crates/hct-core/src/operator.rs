//! Bounded linear operators between inner-product spaces.
//!
//! In finite dimension every densely defined closed operator is realised as
//! a total bounded operator given by its matrix; the Gram matrices of the
//! two spaces carry all metric information. The Hilbert-space adjoint is
//! the weighted transpose `A* = G0⁻¹·Aᵀ·G1`, characterised by the pairing
//! `⟨Ax, y⟩_{G1} = ⟨x, A*y⟩_{G0}`.

use ndarray::prelude::*;

use crate::error::Error;
use crate::numeric::{self, WeightedSvd};
use crate::space::{Space, SubspaceBasis};
use crate::tol;
use crate::Result;

#[derive(Debug, Clone)]
pub struct BoundedOperator {
    domain: Space,
    codomain: Space,
    matrix: Array2<f64>,
    label: String,
}

impl BoundedOperator {
    pub fn new(
        domain: Space,
        codomain: Space,
        matrix: Array2<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if matrix.dim() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch {
                context: "BoundedOperator::new",
                expected: (codomain.dim(), domain.dim()),
                found: matrix.dim(),
            });
        }
        Ok(BoundedOperator {
            domain,
            codomain,
            matrix,
            label: label.into(),
        })
    }

    /// Zero operator between two spaces.
    pub fn zero(domain: Space, codomain: Space, label: impl Into<String>) -> Self {
        let matrix = Array2::zeros((codomain.dim(), domain.dim()));
        BoundedOperator {
            domain,
            codomain,
            matrix,
            label: label.into(),
        }
    }

    /// Identity on a space.
    pub fn identity(space: Space, label: impl Into<String>) -> Self {
        let matrix = Array2::eye(space.dim());
        BoundedOperator {
            domain: space.clone(),
            codomain: space,
            matrix,
            label: label.into(),
        }
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, x: &Array1<f64>) -> Result<Array1<f64>> {
        if x.len() != self.domain.dim() {
            return Err(Error::ShapeMismatch {
                context: "BoundedOperator::apply",
                expected: (self.domain.dim(), 1),
                found: (x.len(), 1),
            });
        }
        Ok(self.matrix.dot(x))
    }

    /// Hilbert-space adjoint `A* = G0⁻¹·Aᵀ·G1 : H1 → H0`.
    pub fn adjoint(&self) -> Result<BoundedOperator> {
        let rhs = self.matrix.t().dot(self.codomain.gram());
        let matrix = self.domain.factor().solve_mat(&rhs)?;
        Ok(BoundedOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix,
            label: format!("{}*", self.label),
        })
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &BoundedOperator) -> Result<BoundedOperator> {
        if other.codomain.dim() != self.domain.dim() {
            return Err(Error::ShapeMismatch {
                context: "BoundedOperator::compose",
                expected: (self.domain.dim(), other.codomain.dim()),
                found: (other.codomain.dim(), other.codomain.dim()),
            });
        }
        Ok(BoundedOperator {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.dot(&other.matrix),
            label: format!("{}∘{}", self.label, other.label),
        })
    }

    /// Weighted operator norm `σ_max`.
    pub fn op_norm(&self) -> Result<f64> {
        let (sigmas, _) = numeric::weighted_singular_values(
            &self.matrix.view(),
            self.domain.factor(),
            self.codomain.factor(),
            tol::DEFAULT_TOL_FACTOR,
        )?;
        Ok(sigmas.iter().copied().fold(0.0, f64::max))
    }

    /// Weighted SVD with the default rank tolerance.
    pub fn weighted_svd(&self) -> Result<WeightedSvd> {
        numeric::weighted_svd(
            &self.matrix.view(),
            self.domain.factor(),
            self.codomain.factor(),
            tol::DEFAULT_TOL_FACTOR,
        )
    }

    /// Gram-orthonormal kernel and range bases plus the numerical rank.
    pub fn kernel_range(&self) -> Result<(SubspaceBasis, SubspaceBasis, usize)> {
        let svd = self.weighted_svd()?;
        numeric::kernel_range_bases(&svd, &self.domain, &self.codomain)
    }

    /// Best constant `c_A = 1/σ_min⁺` together with `σ_min⁺`; errors with
    /// [`Error::NoReducedPart`] when the operator is numerically zero.
    pub fn reduced_constant(&self) -> Result<(f64, f64)> {
        let (sigmas, cutoff) = numeric::weighted_singular_values(
            &self.matrix.view(),
            self.domain.factor(),
            self.codomain.factor(),
            tol::DEFAULT_TOL_FACTOR,
        )?;
        let sigma_min_positive = sigmas
            .iter()
            .copied()
            .filter(|&s| s > cutoff)
            .fold(f64::INFINITY, f64::min);
        if !sigma_min_positive.is_finite() {
            return Err(Error::NoReducedPart);
        }
        Ok((1.0 / sigma_min_positive, sigma_min_positive))
    }

    /// Weighted pseudoinverse as an operator `H1 → H0`; equals `(A⊥)⁻¹`
    /// on `R(A)` and vanishes on `R(A)^⊥`.
    pub fn pseudoinverse(&self) -> Result<BoundedOperator> {
        let matrix = numeric::weighted_pseudoinverse(
            &self.matrix.view(),
            self.domain.factor(),
            self.codomain.factor(),
            tol::DEFAULT_TOL_FACTOR,
        )?;
        Ok(BoundedOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix,
            label: format!("{}⁺", self.label),
        })
    }

    /// Largest relative pairing defect `|⟨Ax,y⟩ − ⟨x,A*y⟩|` over seeded
    /// random samples, normalised by `‖Ax‖‖y‖ + ‖x‖‖A*y‖ + ‖x‖‖y‖`.
    pub fn pairing_defect(&self, adjoint: &BoundedOperator, samples: usize, seed: u64) -> f64 {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let x = Array1::from_shape_fn(self.domain.dim(), |_| 2.0 * rng.random::<f64>() - 1.0);
            let y = Array1::from_shape_fn(self.codomain.dim(), |_| 2.0 * rng.random::<f64>() - 1.0);
            let ax = self.matrix.dot(&x);
            let ay = adjoint.matrix.dot(&y);
            let lhs = self.codomain.inner(&ax, &y);
            let rhs = self.domain.inner(&x, &ay);
            let scale = self.codomain.norm(&ax) * self.codomain.norm(&y)
                + self.domain.norm(&x) * self.domain.norm(&ay)
                + self.domain.norm(&x) * self.codomain.norm(&y);
            if scale > 0.0 {
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::InnerProductSpace;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        let r = Array2::from_shape_fn((n, n), |_| rng.random::<f64>() - 0.5);
        let mut g = r.t().dot(&r);
        for i in 0..n {
            g[[i, i]] += 1.0;
        }
        g
    }

    #[test]
    fn adjoint_is_transpose_for_identity_grams() {
        let h0 = InnerProductSpace::standard(3, "H0").unwrap();
        let h1 = InnerProductSpace::standard(2, "H1").unwrap();
        let a = BoundedOperator::new(h0, h1, array![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]], "A").unwrap();
        let adj = a.adjoint().unwrap();
        assert_abs_diff_eq!(adj.matrix(), &a.matrix().t().to_owned(), epsilon = 1e-14);
    }

    #[test]
    fn double_adjoint_returns_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g0 = random_spd(5, &mut rng);
        let g1 = random_spd(3, &mut rng);
        let h0 = InnerProductSpace::from_gram(g0, "H0").unwrap();
        let h1 = InnerProductSpace::from_gram(g1, "H1").unwrap();
        let m = Array2::from_shape_fn((3, 5), |_| rng.random::<f64>() - 0.5);
        let a = BoundedOperator::new(h0, h1, m.clone(), "A").unwrap();
        let back = a.adjoint().unwrap().adjoint().unwrap();
        let rel = numeric::frob(&(back.matrix() - &m).view()) / numeric::frob(&m.view());
        assert!(rel <= tol::DOUBLE_ADJOINT, "rel {rel}");
    }

    #[test]
    fn pairing_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g0 = random_spd(6, &mut rng);
        let g1 = random_spd(4, &mut rng);
        let h0 = InnerProductSpace::from_gram(g0, "H0").unwrap();
        let h1 = InnerProductSpace::from_gram(g1, "H1").unwrap();
        let m = Array2::from_shape_fn((4, 6), |_| rng.random::<f64>() - 0.5);
        let a = BoundedOperator::new(h0, h1, m, "A").unwrap();
        let adj = a.adjoint().unwrap();
        assert!(a.pairing_defect(&adj, 100, 99) <= tol::ADJOINT_PAIRING);
    }

    #[test]
    fn reduced_constant_of_diagonal() {
        let h = InnerProductSpace::standard(3, "H").unwrap();
        let a = BoundedOperator::new(
            h.clone(),
            h.clone(),
            Array2::from_diag(&array![2.0, 5.0, 0.0]),
            "A",
        )
        .unwrap();
        let (c, smin) = a.reduced_constant().unwrap();
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(smin, 2.0, epsilon = 1e-12);
        let zero = BoundedOperator::zero(h.clone(), h, "0");
        assert!(matches!(zero.reduced_constant(), Err(Error::NoReducedPart)));
    }

    #[test]
    fn pseudoinverse_norm_equals_best_constant() {
        // ‖(A⊥)⁻¹‖ = c_A
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g0 = random_spd(5, &mut rng);
        let g1 = random_spd(4, &mut rng);
        let h0 = InnerProductSpace::from_gram(g0, "H0").unwrap();
        let h1 = InnerProductSpace::from_gram(g1, "H1").unwrap();
        let m = Array2::from_shape_fn((4, 5), |_| rng.random::<f64>() - 0.5);
        let a = BoundedOperator::new(h0, h1, m, "A").unwrap();
        let (c, _) = a.reduced_constant().unwrap();
        let pinv_norm = a.pseudoinverse().unwrap().op_norm().unwrap();
        assert!((c - pinv_norm).abs() <= 1e-10 * c, "c {c} vs ‖A⁺‖ {pinv_norm}");
    }

    #[test]
    fn best_constant_bounds_reduced_vectors() {
        // Lemma-style check: ‖x‖ ≤ (c_A + eps)·‖Ax‖ for x ⊥ N(A)
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let g0 = random_spd(6, &mut rng);
        let g1 = random_spd(5, &mut rng);
        let h0 = InnerProductSpace::from_gram(g0, "H0").unwrap();
        let h1 = InnerProductSpace::from_gram(g1, "H1").unwrap();
        let b1 = Array2::from_shape_fn((5, 3), |_| rng.random::<f64>() - 0.5);
        let b2 = Array2::from_shape_fn((3, 6), |_| rng.random::<f64>() - 0.5);
        let a = BoundedOperator::new(h0.clone(), h1, b1.dot(&b2), "A").unwrap();
        let (c, _) = a.reduced_constant().unwrap();
        let (kernel, _, _) = a.kernel_range().unwrap();
        let pk = numeric::orthogonal_projector(&kernel);
        for _ in 0..100 {
            let z = Array1::from_shape_fn(6, |_| 2.0 * rng.random::<f64>() - 1.0);
            let x = &z - &pk.dot(&z);
            let ax = a.apply(&x).unwrap();
            assert!(h0.norm(&x) <= (c + 1e-9) * a.codomain().norm(&ax) + 1e-12);
        }
    }
}
