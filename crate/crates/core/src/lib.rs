//! Exact machinery for the Matrix-Tree theorem.
//!
//! Everything here works over exact rationals: cofactors of Laplace-like
//! matrices, labeled-tree enumeration and amplitude sums, matrix and tree
//! contraction along an edge, exact directional derivatives along the
//! tangent directions `v_ij`, and a symbolic check of
//! `C(L) = (-1)^(n+1) * sum_tau A_tau(L)` for small `n`.

pub mod derivative;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod symbolic;
mod text;
pub mod tree;

pub use derivative::{TangentDirection, VerificationReport};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use linalg::{DoublyBalancedMatrix, LaplaceLikeMatrix, SquareMatrix};
pub use scalar::Scalar;
pub use symbolic::{Monomial, MultivariatePolynomial};
pub use tree::{LabeledTree, PruferSequence};
