//! Coherence-vector representation of N-level density operators.
//!
//! A density operator on an N-dimensional Hilbert space is written as
//!
//! ```text
//! rho = (1/N) (1 + sqrt(N(N-1)/2) n . lambda)
//! ```
//!
//! where `lambda` is an orthogonal, traceless, Hermitian basis normalized to
//! `Tr(lambda_i lambda_j) = 2 delta_ij` and `n` is a real vector of length
//! `N^2 - 1`. Pure states satisfy `n.n = 1` and `n * n = n` (star product).
//!
//! The crate is organised as:
//!
//! - [`su_basis`]: generalized Gell-Mann and tensor-product bases, `f`/`d` tensors.
//! - [`coherence`]: conversions between matrices and coherence vectors, star product.
//! - [`invariants`]: trace powers by two routes, Casimir invariants, degeneracy tests.
//! - [`positivity`]: characteristic-polynomial coefficients and the positivity gate.
//! - [`composite`]: partial trace/transpose, correlation matrices, Werner states.
//! - [`entanglement`]: spin flip, concurrence, and the three-tangle.
//! - [`sampling`]: random states and unitaries used by tests and sweeps.

#![forbid(unsafe_code)]

pub mod coherence;
pub mod composite;
pub mod entanglement;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod positivity;
pub mod sampling;
pub mod su_basis;
pub mod tol;

pub use coherence::{CoherenceState, HermitianOperator};
pub use error::{Error, Result};
pub use su_basis::{BasisSet, StructureTensors};
pub use tol::Tolerances;

pub use num_complex::Complex64;
