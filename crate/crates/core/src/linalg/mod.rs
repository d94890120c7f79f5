//! Dense complex linear algebra sized for one- and two-qubit problems.

pub mod eigen;
pub mod matrix;
pub mod qubit;
pub mod schmidt;
pub mod svd;

pub use eigen::{eig_hermitian, Eigen};
pub use matrix::{c, fix_phase, inner, norm, normalized, re, ComplexMatrix};
pub use qubit::{kron, kron_vec, partial_trace};
pub use schmidt::{schmidt, SchmidtForm};
pub use svd::{svd, Svd};
