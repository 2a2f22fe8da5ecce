//! Discrete Hilbert complex toolbox.
//!
//! This crate provides a finite-dimensional toolbox for Hilbert complexes
//! `H0 --A0--> H1 --A1--> H2` built from inner-product spaces (SPD Gram
//! matrices) and matrix operators, together with a concrete realisation on
//! simplicial meshes in 2-D and 3-D: the de Rham complex of lowest-order
//! Whitney forms with mixed boundary conditions (a tangential part `Γt` and
//! its complement `Γn`) and admissible SPD weights.
//!
//! The layers are
//!
//! * [`numeric`] — Gram-metric (weighted) dense linear algebra: Cholesky
//!   whitening, rank-revealing weighted SVD, orthogonal projectors, and
//!   weighted pseudoinverses;
//! * [`space`], [`operator`], [`complex`] — inner-product spaces, bounded
//!   operators with adjoints, complex pairs, refined Helmholtz
//!   decompositions, cohomology spaces, best (Friedrichs/Poincaré)
//!   constants, and long complexes with their end embeddings/projections;
//! * [`regdeco`] — regular decomposition and potential operators, projector
//!   diagnostics, pre-bases and three-term decompositions, alternative
//!   projection checks;
//! * [`mesh`], [`catalog`], [`derham`] — oriented simplicial meshes, a
//!   generator catalog, coboundary/mass assembly, Dirichlet/Neumann fields,
//!   cohomology-dimension dualities, weight independence, and Poincaré
//!   constants;
//! * [`homology`] — an independent integer Smith-normal-form oracle for
//!   relative cohomology dimensions;
//! * [`json`] — serialization schemas for spaces, operators, and reports.

pub mod catalog;
pub mod complex;
pub mod dec;
pub mod derham;
pub mod error;
pub mod homology;
pub mod json;
pub mod mesh;
pub mod numeric;
pub mod operator;
pub mod regdeco;
pub mod space;
pub mod tol;
pub mod whitney;

pub use complex::{ComplexChain, ComplexPair, EndOperators, HelmholtzDecomposition, MiniFatReport};
pub use error::Error;
pub use mesh::{BoundaryPartition, SimplicialMesh};
pub use operator::BoundedOperator;
pub use space::{InnerProductSpace, Space, SubspaceBasis};

/// Crate result type.
pub type Result<T> = std::result::Result<T, Error>;
