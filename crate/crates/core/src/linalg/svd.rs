use super::eigen::eig_hermitian;
use super::matrix::{fix_phase, inner, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;

/// `m = u · diag(s) · v†` with `s[0] ≥ s[1] ≥ 0`.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub s: [T; 2],
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        &(&self.u * &ComplexMatrix::diag_real(&self.s)) * &self.v.adjoint()
    }

    pub fn left(&self, k: usize) -> Vec<Complex<T>> {
        self.u.column(k)
    }

    pub fn right(&self, k: usize) -> Vec<Complex<T>> {
        self.v.column(k)
    }
}

/// Unit vector orthogonal to the unit 2-vector `(a, b)`.
pub fn complement<T: Real>(x: &[Complex<T>]) -> Vec<Complex<T>> {
    vec![x[1].conj(), -x[0].conj()]
}

/// Closed-form SVD of a 2×2 matrix via the eigendecomposition of `m†m`.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Unsupported(format!(
            "SVD is implemented for 2x2 matrices only, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidParameter("non-finite matrix entry".into()));
    }
    let gram = &m.adjoint() * m;
    let eig = eig_hermitian(&gram)?;
    let s0 = eig.values[0].max(T::zero()).sqrt();
    if s0 == T::zero() {
        return Ok(Svd {
            u: ComplexMatrix::identity(2),
            s: [T::zero(), T::zero()],
            v: ComplexMatrix::identity(2),
        });
    }
    let v0 = eig.vector(0);
    let v1 = eig.vector(1);
    // |det m| / s0 keeps full relative accuracy for nearly rank-1 inputs.
    let s1 = (m.determinant_2x2().norm() / s0).min(s0);

    let u0: Vec<_> = m.mat_vec(&v0).iter().map(|&z| z / s0).collect();
    let mut u1 = complement(&u0);
    let w = inner(&u1, &m.mat_vec(&v1));
    if w.norm() > T::zero_tol() * s0 {
        let phase = w / w.norm();
        u1.iter_mut().for_each(|z| *z = *z * phase);
    } else {
        fix_phase(&mut u1);
    }

    Ok(Svd {
        u: ComplexMatrix::from_columns(&[u0, u1]),
        s: [s0, s1],
        v: ComplexMatrix::from_columns(&[v0, v1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::c;

    type M = ComplexMatrix<f64>;

    #[test]
    fn diagonal_input_has_identity_factors() {
        for &p in &[0.0, 0.3, 1.0] {
            let m = M::diag_real(&[1.0, (1.0f64 - p).sqrt()]);
            let d = svd(&m).unwrap();
            assert!(d.u.frobenius_distance(&M::identity(2)) < 1e-15, "p={p}");
            assert!(d.v.frobenius_distance(&M::identity(2)) < 1e-15, "p={p}");
            assert!((d.s[1] - (1.0f64 - p).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_one_canonical_operator() {
        let p: f64 = 0.8;
        let (eta, zeta) = (c(0.6, 0.0), c(0.8, 0.0));
        let m = M::from_row_major(2, 2, vec![c(0., 0.), eta * p.sqrt(), c(0., 0.), zeta * p.sqrt()]).unwrap();
        let d = svd(&m).unwrap();
        assert!((d.s[0] - p.sqrt()).abs() < 1e-15);
        assert!(d.s[1] < 1e-15);
        assert!(d.reconstruct().frobenius_distance(&m) < 1e-14);
    }

    #[test]
    fn complex_input_reconstructs() {
        let m = M::from_row_major(2, 2, vec![c(0.3, -1.2), c(0.7, 0.1), c(-0.4, 0.9), c(1.1, 0.5)]).unwrap();
        let d = svd(&m).unwrap();
        assert!(d.reconstruct().frobenius_distance(&m) < 1e-13);
        assert!(d.u.unitarity_deviation() < 1e-13);
        assert!(d.v.unitarity_deviation() < 1e-13);
        assert!(d.s[0] >= d.s[1]);
    }

    #[test]
    fn zero_and_wrong_shape() {
        let d = svd(&M::zeros(2, 2)).unwrap();
        assert_eq!(d.s, [0.0, 0.0]);
        assert!(matches!(svd(&M::zeros(3, 3)), Err(Error::Unsupported(_))));
    }
}
