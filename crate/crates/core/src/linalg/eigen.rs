//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::{fix_phase, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues in descending order with matching unit eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vector(k);
            out = &out + &ComplexMatrix::projector(&v).scale_real(lambda);
        }
        out
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix.
///
/// Values are sorted descending. Within a cluster of numerically equal
/// values, vectors are ordered by the real part of their first nonzero entry
/// (larger first), then lexicographically by real parts. Each vector's first
/// entry of largest magnitude is real and positive.
pub fn eig_hermitian<T: Real>(h: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::InvalidParameter("non-finite matrix entry".into()));
    }
    let n = h.rows();
    let scale = h.frobenius_norm().max(T::one());
    let dev = h.hermitian_deviation();
    if dev > T::check_tol() * scale {
        return Err(Error::NotHermitian(dev.to_f64_lossy()));
    }

    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * T::half());
    let mut v = ComplexMatrix::<T>::identity(n);

    let norm = a.frobenius_norm();
    let target = T::epsilon() * norm;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if off_diagonal(&a) > T::lit(1e3) * target.max(T::min_positive_value()) {
        return Err(Error::Numerical("Jacobi iteration did not converge".into()));
    }

    let mut pairs: Vec<(T, Vec<Complex<T>>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    sort_pairs(&mut pairs, T::lit(64.0) * T::epsilon() * scale);

    let values = pairs.iter().map(|(l, _)| *l).collect();
    let columns: Vec<_> = pairs.into_iter().map(|(_, c)| c).collect();
    Ok(Eigen {
        values,
        vectors: ComplexMatrix::from_columns(&columns),
    })
}

fn off_diagonal<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi step annihilating `a[p][q]`.
///
/// With `a_pq = r e^{iφ}` the rotation is `G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]`
/// restricted to rows/columns `p, q`, and `a ← G† a G`, `v ← v G`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::two() * r);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    let gpp = Complex::new(c, T::zero());
    let gpq = Complex::new(s, T::zero());
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.rows();
    // a ← a G (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // a ← G† a (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Descending by value; within clusters closer than `tie` the vectors are
/// reordered by the deterministic key while the values stay sorted.
fn sort_pairs<T: Real>(pairs: &mut [(T, Vec<Complex<T>>)], tie: T) {
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 <= tie {
            end += 1;
        }
        if end - start > 1 {
            let values: Vec<T> = pairs[start..end].iter().map(|p| p.0).collect();
            pairs[start..end].sort_by(|x, y| vector_key_cmp(&y.1, &x.1, tie));
            for (p, v) in pairs[start..end].iter_mut().zip(values) {
                p.0 = v;
            }
        }
        start = end;
    }
}

fn vector_key_cmp<T: Real>(a: &[Complex<T>], b: &[Complex<T>], tol: T) -> Ordering {
    let first = |v: &[Complex<T>]| {
        v.iter()
            .find(|z| z.norm() > tol)
            .map_or(T::zero(), |z| z.re)
            .to_f64_lossy()
    };
    first(a).total_cmp(&first(b)).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.re.to_f64_lossy().total_cmp(&y.re.to_f64_lossy()))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}
