use num_complex::Complex;

use super::matrix::{norm, ComplexMatrix};
use super::svd::svd;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `ψ = Σ_k coeffs[k] · basis_a[k] ⊗ basis_b[k]`.
#[derive(Clone, Debug)]
pub struct SchmidtForm<T> {
    pub coeffs: [T; 2],
    pub basis_a: [Vec<Complex<T>>; 2],
    pub basis_b: [Vec<Complex<T>>; 2],
}

impl<T: Real> SchmidtForm<T> {
    pub fn reconstruct(&self) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); 4];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out[2 * i + j] = out[2 * i + j] + self.basis_a[k][i] * self.basis_b[k][j] * self.coeffs[k];
                }
            }
        }
        out
    }
}

/// Schmidt decomposition of a normalized two-qubit pure state, from the SVD
/// of its reshaped 2×2 coefficient matrix.
pub fn schmidt<T: Real>(state: &[Complex<T>], tol: T) -> Result<SchmidtForm<T>> {
    if state.len() != 4 {
        return Err(Error::Dimension(format!(
            "two-qubit state needs 4 amplitudes, got {}",
            state.len()
        )));
    }
    let n = norm(state);
    if !n.is_finite() || (n - T::one()).abs() > tol {
        return Err(Error::NotNormalized(n.to_f64_lossy()));
    }
    let coeff = ComplexMatrix::from_fn(2, 2, |i, j| state[2 * i + j]);
    let d = svd(&coeff)?;
    let conj = |v: Vec<Complex<T>>| v.into_iter().map(|z| z.conj()).collect::<Vec<_>>();
    Ok(SchmidtForm {
        coeffs: d.s,
        basis_a: [d.left(0), d.left(1)],
        basis_b: [conj(d.right(0)), conj(d.right(1))],
    })
}
