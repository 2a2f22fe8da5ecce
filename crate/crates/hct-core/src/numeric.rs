//! Weighted (Gram-metric) dense linear algebra primitives.
//!
//! All routines here work with explicit SPD Gram matrices `G` that define
//! the inner product `⟨x, y⟩_G = xᵀGy`. Whitening via the Cholesky factor
//! `G = LLᵀ` turns Gram-metric questions into Euclidean ones: the whitened
//! coordinates of `x` are `x̃ = Lᵀx`, and an operator `A : (H0, G0) → (H1, G1)`
//! becomes `B = L1ᵀ A L0⁻ᵀ`. The singular values of `B` are the weighted
//! singular values of `A`; mapping the Euclidean singular bases back through
//! `L⁻ᵀ` yields Gram-orthonormal bases, so every orthogonality statement
//! downstream is literal in the weighted metric.

use ndarray::prelude::*;
use ndarray_linalg::{Cholesky, Diag, EigValsh, Eigh, SolveTriangular, SVD, UPLO};

use crate::error::Error;
use crate::space::{BasisKind, Space, SubspaceBasis};
use crate::tol;
use crate::Result;

/// Cholesky factor of an SPD Gram matrix, `G = L·Lᵀ` with `L` lower
/// triangular and positive diagonal.
#[derive(Debug, Clone)]
pub struct GramFactor {
    space_dim: usize,
    lower: Array2<f64>,
    condition_estimate: f64,
}

impl GramFactor {
    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn lower(&self) -> &Array2<f64> {
        &self.lower
    }

    /// Two-norm condition estimate of `G` (power iteration on `G` and `G⁻¹`).
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Solves `G x = b` using the stored factor.
    pub fn solve(&self, b: &Array1<f64>) -> Result<Array1<f64>> {
        if self.space_dim == 0 {
            return Ok(Array1::zeros(0));
        }
        let y = self
            .lower
            .solve_triangular(UPLO::Lower, Diag::NonUnit, b)?;
        let upper = self.lower.t().as_standard_layout().to_owned();
        Ok(upper.solve_triangular(UPLO::Upper, Diag::NonUnit, &y)?)
    }

    /// Solves `G X = B` column-wise.
    pub fn solve_mat(&self, b: &Array2<f64>) -> Result<Array2<f64>> {
        if self.space_dim == 0 || b.ncols() == 0 {
            return Ok(Array2::zeros(b.dim()));
        }
        let y = self
            .lower
            .solve_triangular(UPLO::Lower, Diag::NonUnit, b)?;
        let upper = self.lower.t().as_standard_layout().to_owned();
        Ok(upper.solve_triangular(UPLO::Upper, Diag::NonUnit, &y)?)
    }

    /// Applies `L⁻ᵀ` from the left: maps whitened coordinates back to the
    /// original ones (columns of Gram-orthonormal bases).
    pub fn unwhiten_cols(&self, m: &Array2<f64>) -> Result<Array2<f64>> {
        if self.space_dim == 0 || m.ncols() == 0 {
            return Ok(m.clone());
        }
        let upper = self.lower.t().as_standard_layout().to_owned();
        Ok(upper.solve_triangular(UPLO::Upper, Diag::NonUnit, m)?)
    }

    /// Applies `Lᵀ` from the left (whitening of column vectors).
    pub fn whiten_cols(&self, m: &Array2<f64>) -> Array2<f64> {
        self.lower.t().dot(m)
    }
}

fn symmetry_defect(g: &ArrayView2<f64>) -> f64 {
    let norm = frob(g);
    if norm == 0.0 {
        return 0.0;
    }
    let d = g - &g.t();
    frob(&d.view()) / norm
}

/// Frobenius norm.
pub fn frob(m: &ArrayView2<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn power_condition_estimate(g: &ArrayView2<f64>, factor: &Array2<f64>) -> f64 {
    let n = g.nrows();
    if n == 0 {
        return 1.0;
    }
    let mut x = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut hi = 0.0;
    for _ in 0..25 {
        let y = g.dot(&x);
        hi = y.dot(&y).sqrt();
        if hi == 0.0 {
            break;
        }
        x = y / hi;
    }
    // inverse iteration via the triangular factor
    let mut x = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut inv_hi = 0.0;
    let upper = factor.t().as_standard_layout().to_owned();
    for _ in 0..25 {
        let y = factor
            .solve_triangular(UPLO::Lower, Diag::NonUnit, &x)
            .and_then(|y| upper.solve_triangular(UPLO::Upper, Diag::NonUnit, &y));
        let Ok(y) = y else { return f64::INFINITY };
        inv_hi = y.dot(&y).sqrt();
        if inv_hi == 0.0 {
            break;
        }
        x = y / inv_hi;
    }
    hi * inv_hi
}

/// Factors an SPD matrix as `G = L·Lᵀ`.
///
/// Rejects matrices with a relative symmetry defect above
/// [`tol::SYMMETRY`] and matrices that are not positive definite. A
/// condition estimate is attached; values above [`tol::GRAM_CONDITION_WARN`]
/// emit a warning since every downstream rank decision degrades with the
/// conditioning of the Gram matrix.
pub fn cholesky_whiten(g: &ArrayView2<f64>) -> Result<GramFactor> {
    let (r, c) = g.dim();
    if r != c {
        return Err(Error::ShapeMismatch {
            context: "cholesky_whiten",
            expected: (r, r),
            found: (r, c),
        });
    }
    let defect = symmetry_defect(g);
    if defect > tol::SYMMETRY {
        return Err(Error::NotSymmetric { defect });
    }
    if r == 0 {
        return Ok(GramFactor {
            space_dim: 0,
            lower: Array2::zeros((0, 0)),
            condition_estimate: 1.0,
        });
    }
    // symmetrise before factoring so the factor reproduces (G + Gᵀ)/2
    let gs = (g.to_owned() + g.t()) * 0.5;
    let lower = gs.cholesky(UPLO::Lower).map_err(|_| {
        // locate the first non-positive pivot for the error report
        let mut m = gs.clone();
        for k in 0..r {
            let pivot = m[[k, k]];
            if pivot <= 0.0 {
                return Error::NotPositiveDefinite { index: k, pivot };
            }
            let piv_sqrt = pivot.sqrt();
            for i in (k + 1)..r {
                let l = m[[i, k]] / piv_sqrt;
                for j in (k + 1)..=i {
                    let v = m[[j, k]] / piv_sqrt;
                    m[[i, j]] -= l * v;
                }
            }
        }
        Error::NotPositiveDefinite {
            index: r - 1,
            pivot: m[[r - 1, r - 1]],
        }
    })?;
    let condition_estimate = power_condition_estimate(&gs.view(), &lower);
    if condition_estimate > tol::GRAM_CONDITION_WARN {
        log::warn!(
            "Gram matrix condition estimate {condition_estimate:.3e} exceeds {:.0e}; rank decisions may be unreliable",
            tol::GRAM_CONDITION_WARN
        );
    }
    Ok(GramFactor {
        space_dim: r,
        lower,
        condition_estimate,
    })
}

/// Weighted singular value decomposition of an operator matrix.
///
/// `left_basis` has `G1`-orthonormal columns, `right_basis` has
/// `G0`-orthonormal columns, and `A = U·Σ·Vᵀ·G0`. Singular values are
/// non-increasing; entries at or below `rank_tolerance` count as zero.
#[derive(Debug, Clone)]
pub struct WeightedSvd {
    pub left_basis: Array2<f64>,
    pub singular_values: Array1<f64>,
    pub right_basis: Array2<f64>,
    pub rank_tolerance: f64,
}

impl WeightedSvd {
    /// Number of singular values above the rank tolerance.
    pub fn rank(&self) -> usize {
        self.singular_values
            .iter()
            .filter(|&&s| s > self.rank_tolerance)
            .count()
    }

    /// Smallest singular value above the rank tolerance, if any.
    pub fn sigma_min_positive(&self) -> Option<f64> {
        self.singular_values
            .iter()
            .copied()
            .filter(|&s| s > self.rank_tolerance)
            .fold(None, |acc: Option<f64>, s| {
                Some(acc.map_or(s, |a| a.min(s)))
            })
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.iter().copied().fold(0.0, f64::max)
    }
}

fn rank_cutoff(tol_factor: f64, sigma_max: f64, rows: usize, cols: usize) -> f64 {
    tol_factor * sigma_max * f64::EPSILON * rows.max(cols).max(1) as f64
}

/// Weighted SVD of `A : (H0, G0) → (H1, G1)`.
///
/// The Euclidean SVD of the whitened matrix `B = L1ᵀ·A·L0⁻ᵀ` is mapped back
/// through the factors, so `UᵀG1U = I` and `VᵀG0V = I`. `tol_factor`
/// scales the rank cutoff; pass [`tol::DEFAULT_TOL_FACTOR`] unless the Gram
/// matrices are badly conditioned.
pub fn weighted_svd(
    a: &ArrayView2<f64>,
    g0: &GramFactor,
    g1: &GramFactor,
    tol_factor: f64,
) -> Result<WeightedSvd> {
    let (m, n) = a.dim();
    if n != g0.space_dim() || m != g1.space_dim() {
        return Err(Error::ShapeMismatch {
            context: "weighted_svd",
            expected: (g1.space_dim(), g0.space_dim()),
            found: (m, n),
        });
    }
    guard_dense(m.max(n))?;
    if m == 0 || n == 0 {
        return Ok(WeightedSvd {
            left_basis: Array2::zeros((m, 0)),
            singular_values: Array1::zeros(0),
            right_basis: Array2::zeros((n, 0)),
            rank_tolerance: 0.0,
        });
    }
    // B = L1ᵀ·A·L0⁻ᵀ, built as L1ᵀ·(L0⁻¹·Aᵀ)ᵀ
    let at = a.t().as_standard_layout().to_owned();
    let x = g0
        .lower()
        .solve_triangular(UPLO::Lower, Diag::NonUnit, &at)?;
    let b = g1.lower().t().dot(&x.t());
    let (u, s, vt) = b.svd(true, true)?;
    let u = u.expect("requested U");
    let vt = vt.expect("requested Vt");
    let k = s.len();
    // gesvd returns non-increasing singular values; keep the thin parts
    let u_thin = u.slice(s![.., ..k]).to_owned();
    let v_thin = vt.slice(s![..k, ..]).t().as_standard_layout().to_owned();
    let left_basis = g1.unwhiten_cols(&u_thin)?;
    let right_basis = g0.unwhiten_cols(&v_thin)?;
    let sigma_max = s.iter().copied().fold(0.0, f64::max);
    Ok(WeightedSvd {
        left_basis,
        singular_values: s,
        right_basis,
        rank_tolerance: rank_cutoff(tol_factor, sigma_max, m, n),
    })
}

/// Weighted singular values only (no bases), via a symmetric eigensolve of
/// the smaller of the two whitened normal matrices. Returns the values in
/// non-increasing order together with the rank cutoff.
pub fn weighted_singular_values(
    a: &ArrayView2<f64>,
    g0: &GramFactor,
    g1: &GramFactor,
    tol_factor: f64,
) -> Result<(Array1<f64>, f64)> {
    let (m, n) = a.dim();
    if n != g0.space_dim() || m != g1.space_dim() {
        return Err(Error::ShapeMismatch {
            context: "weighted_singular_values",
            expected: (g1.space_dim(), g0.space_dim()),
            found: (m, n),
        });
    }
    guard_dense(m.max(n))?;
    if m == 0 || n == 0 {
        return Ok((Array1::zeros(0), 0.0));
    }
    let at = a.t().as_standard_layout().to_owned();
    let x = g0
        .lower()
        .solve_triangular(UPLO::Lower, Diag::NonUnit, &at)?;
    let b = g1.lower().t().dot(&x.t());
    let gram = if n <= m { b.t().dot(&b) } else { b.dot(&b.t()) };
    let mut evs = gram.eigvalsh(UPLO::Lower)?.to_vec();
    evs.reverse();
    let sigmas: Array1<f64> = evs.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sigma_max = sigmas.iter().copied().fold(0.0, f64::max);
    let cutoff = rank_cutoff(tol_factor, sigma_max, m, n);
    Ok((sigmas, cutoff))
}

fn guard_dense(dim: usize) -> Result<()> {
    if dim > tol::DENSE_SIZE_GUARD {
        return Err(Error::SizeGuard {
            dim,
            limit: tol::DENSE_SIZE_GUARD,
        });
    }
    Ok(())
}

/// Splits a weighted SVD into Gram-orthonormal kernel and range bases.
///
/// The kernel basis lives in the domain space, the range basis in the
/// codomain space, and `rank + dim(kernel) = dim(H0)`.
pub fn kernel_range_bases(
    svd: &WeightedSvd,
    domain: &Space,
    codomain: &Space,
) -> Result<(SubspaceBasis, SubspaceBasis, usize)> {
    let rank = svd.rank();
    let n = svd.right_basis.nrows();
    let k = svd.singular_values.len();
    // kernel: right singular vectors with σ ≤ cutoff, plus the part of H0
    // not reached by the thin factorization (only when rows < cols)
    let mut kernel_cols: Vec<ArrayView1<f64>> = Vec::new();
    for j in rank..k {
        kernel_cols.push(svd.right_basis.column(j));
    }
    let mut kernel = stack_cols(n, &kernel_cols);
    if k < n {
        // complete the kernel with a G0-orthonormal basis of the orthogonal
        // complement of all right singular vectors
        let completion = complement_basis(&svd.right_basis.view(), domain)?;
        kernel = concat_cols(&kernel, &completion);
    }
    let range_cols: Vec<ArrayView1<f64>> = (0..rank).map(|j| svd.left_basis.column(j)).collect();
    let range = stack_cols(svd.left_basis.nrows(), &range_cols);
    let kernel = SubspaceBasis::new(domain.clone(), kernel, BasisKind::Kernel)?;
    let range = SubspaceBasis::new(codomain.clone(), range, BasisKind::Range)?;
    Ok((kernel, range, rank))
}

fn stack_cols(rows: usize, cols: &[ArrayView1<f64>]) -> Array2<f64> {
    let mut out = Array2::zeros((rows, cols.len()));
    for (j, c) in cols.iter().enumerate() {
        out.column_mut(j).assign(c);
    }
    out
}

fn concat_cols(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let mut out = Array2::zeros((a.nrows(), a.ncols() + b.ncols()));
    out.slice_mut(s![.., ..a.ncols()]).assign(a);
    out.slice_mut(s![.., a.ncols()..]).assign(b);
    out
}

/// G-orthonormal basis of the orthogonal complement of `span(cols)`.
fn complement_basis(cols: &ArrayView2<f64>, space: &Space) -> Result<Array2<f64>> {
    let n = space.dim();
    // whiten, find the Euclidean complement via full SVD, unwhiten
    let w = space.factor().whiten_cols(&cols.to_owned());
    if w.ncols() == 0 {
        let id = Array2::eye(n);
        return space.factor().unwhiten_cols(&id);
    }
    let (u, s, _) = w.svd(true, false)?;
    let u = u.expect("requested U");
    let cutoff = s.iter().copied().fold(0.0, f64::max) * f64::EPSILON * n as f64 * 100.0;
    let r = s.iter().filter(|&&v| v > cutoff).count();
    let comp = u.slice(s![.., r..]).to_owned();
    space.factor().unwhiten_cols(&comp)
}

/// G-orthogonal projector onto the span of a Gram-orthonormal basis,
/// `P = B·Bᵀ·G`. The empty basis gives the zero projector.
pub fn orthogonal_projector(basis: &SubspaceBasis) -> Array2<f64> {
    let b = basis.columns();
    let g = basis.space().gram();
    b.dot(&b.t()).dot(g)
}

/// Weighted Moore–Penrose pseudoinverse `A⁺ : (H1, G1) → (H0, G0)`.
///
/// Satisfies `A·A⁺ = P_{R(A)}` and `A⁺·A = P_{N(A)⊥}` in the respective
/// Gram metrics and maps the G1-orthogonal complement of `R(A)` to zero.
/// On the range of `A` this is the inverse of the reduced operator, so its
/// weighted operator norm equals the best constant `c_A`.
pub fn weighted_pseudoinverse(
    a: &ArrayView2<f64>,
    g0: &GramFactor,
    g1: &GramFactor,
    tol_factor: f64,
) -> Result<Array2<f64>> {
    let svd = weighted_svd(a, g0, g1, tol_factor)?;
    let (m, n) = a.dim();
    let rank = svd.rank();
    if rank == 0 {
        return Ok(Array2::zeros((n, m)));
    }
    // A⁺ = V_r Σ_r⁻¹ U_rᵀ G1
    let v_r = svd.right_basis.slice(s![.., ..rank]);
    let u_r = svd.left_basis.slice(s![.., ..rank]);
    let inv_sigma = Array2::from_diag(
        &svd.singular_values
            .slice(s![..rank])
            .mapv(|s| 1.0 / s),
    );
    let g1_full = g1.lower().dot(&g1.lower().t());
    Ok(v_r.dot(&inv_sigma).dot(&u_r.t()).dot(&g1_full))
}

/// Symmetric eigendecomposition helper used for Gram-metric self-adjoint
/// operators: eigenvalues ascending, eigenvectors as columns.
pub fn symmetric_eigen(m: &ArrayView2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    if m.nrows() == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let (vals, vecs) = m.to_owned().eigh(UPLO::Lower)?;
    Ok((vals, vecs))
}
