//! Qubit-register helpers: tensor products, partial traces, standard gates
//! and states, density-matrix checks and random sampling.
//!
//! Qubits are numbered from 1, most significant first: in `|q1 q2 … qn⟩`
//! qubit 1 is the leftmost tensor factor.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::eigen::eig_hermitian;
use super::matrix::{c, inner, norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn kron_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn qubit_count<T: Real>(rho: &ComplexMatrix<T>, n_qubits: usize) -> Result<usize> {
    let dim = 1usize.checked_shl(n_qubits as u32).filter(|_| n_qubits < 16);
    match dim {
        Some(d) if rho.rows() == d && rho.cols() == d => Ok(d),
        _ => Err(Error::Dimension(format!(
            "{}x{} matrix is not a {n_qubits}-qubit operator",
            rho.rows(),
            rho.cols()
        ))),
    }
}

/// Traces out the listed qubits (1-based) of an `n_qubits` register.
pub fn partial_trace<T: Real>(rho: &ComplexMatrix<T>, n_qubits: usize, traced: &[usize]) -> Result<ComplexMatrix<T>> {
    qubit_count(rho, n_qubits)?;
    if let Some(&q) = traced.iter().find(|&&q| q == 0 || q > n_qubits) {
        return Err(Error::Dimension(format!("qubit {q} outside 1..={n_qubits}")));
    }
    let is_traced = |q: usize| traced.contains(&(q + 1));
    let kept: Vec<usize> = (0..n_qubits).filter(|&q| !is_traced(q)).collect();
    let gone: Vec<usize> = (0..n_qubits).filter(|&q| is_traced(q)).collect();

    // Bit position of qubit q (0-based here) within a basis index.
    let shift = |q: usize| n_qubits - 1 - q;
    let compose = |kept_bits: usize, gone_bits: usize| {
        let mut idx = 0usize;
        for (k, &q) in kept.iter().enumerate() {
            idx |= ((kept_bits >> (kept.len() - 1 - k)) & 1) << shift(q);
        }
        for (k, &q) in gone.iter().enumerate() {
            idx |= ((gone_bits >> (gone.len() - 1 - k)) & 1) << shift(q);
        }
        idx
    };

    let out_dim = 1usize << kept.len();
    let sum_dim = 1usize << gone.len();
    Ok(ComplexMatrix::from_fn(out_dim, out_dim, |r, col| {
        (0..sum_dim).map(|t| rho[(compose(r, t), compose(col, t))]).sum()
    }))
}

/// Permutation operator exchanging qubits `a` and `b` (1-based).
pub fn swap_qubits<T: Real>(n_qubits: usize, a: usize, b: usize) -> ComplexMatrix<T> {
    assert!(
        a >= 1 && b >= 1 && a <= n_qubits && b <= n_qubits,
        "qubit index out of range"
    );
    let dim = 1usize << n_qubits;
    let (sa, sb) = (n_qubits - a, n_qubits - b);
    let mut p = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let (ba, bb) = ((i >> sa) & 1, (i >> sb) & 1);
        let j = (i & !(1 << sa) & !(1 << sb)) | (bb << sa) | (ba << sb);
        p[(j, i)] = c(1.0, 0.0);
    }
    p
}

pub fn basis_ket<T: Real>(dim: usize, index: usize) -> Vec<Complex<T>> {
    let mut v = vec![c(0.0, 0.0); dim];
    v[index] = c(1.0, 0.0);
    v
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn phi_plus<T: Real>() -> Vec<Complex<T>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]
}

/// `(|00⟩ − |11⟩)/√2`.
pub fn phi_minus<T: Real>() -> Vec<Complex<T>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)]
}

/// `(|01⟩ + |10⟩)/√2`.
pub fn psi_plus<T: Real>() -> Vec<Complex<T>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn psi_minus<T: Real>() -> Vec<Complex<T>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]
}

pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, h, h, -h])
}

/// CNOT with the first qubit as control.
pub fn cnot<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.])
}

pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.])
}

pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -1.0),
        (1, 0) => c(0.0, 1.0),
        _ => c(0.0, 0.0),
    })
}

pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real(2, 2, &[1., 0., 0., -1.])
}

/// `⟨Φ⁺|ρ|Φ⁺⟩`.
pub fn fidelity<T: Real>(rho: &ComplexMatrix<T>) -> T {
    rho.expectation(&phi_plus()).re
}

/// `1 − ⟨Φ⁺|ρ|Φ⁺⟩` computed from the other three Bell populations, which
/// keeps relative accuracy when the fidelity is close to 1.
pub fn infidelity<T: Real>(rho: &ComplexMatrix<T>) -> T {
    [phi_minus(), psi_plus(), psi_minus()]
        .iter()
        .map(|b| rho.expectation(b).re)
        .sum::<T>()
        .max(T::zero())
}

/// Checks that `rho` is a trace-one positive semidefinite operator on
/// `n_qubits` qubits.
pub fn check_density<T: Real>(rho: &ComplexMatrix<T>, n_qubits: usize, tol: T) -> Result<()> {
    qubit_count(rho, n_qubits)?;
    let tr = rho.trace();
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(Error::InvalidDensity(format!("trace {tr}")));
    }
    let eig = eig_hermitian(rho)?;
    let min = eig.values[eig.values.len() - 1];
    if min < -tol {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
    }
    Ok(())
}

/// Complex standard normal sample (independent real and imaginary parts).
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary: Gram-Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = gaussian_matrix::<T, R>(rng, n, n);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for q in &cols {
            let proj = inner(q, &v);
            v.iter_mut().zip(q).for_each(|(x, y)| *x = *x - *y * proj);
        }
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x = *x / nv);
        cols.push(v);
    }
    ComplexMatrix::from_columns(&cols)
}
