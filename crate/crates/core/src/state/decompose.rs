use std::cmp::Ordering;

use num_complex::Complex;

use super::CanonicalStateParams;
use crate::error::{Error, Result};
use crate::linalg::qubit::{hadamard, kron};
use crate::linalg::{eig_hermitian, schmidt, ComplexMatrix};
use crate::scalar::Real;

/// `‖(U_A⊗U_B) ρ (U_A⊗U_B)† − (F|μ⟩⟨μ| + (1−F)|ν⟩⟨ν|)‖_F`.
pub fn verify_canonical<T: Real>(params: &CanonicalStateParams<T>, rho: &ComplexMatrix<T>) -> T {
    if rho.rows() != 4 || rho.cols() != 4 {
        return T::infinity();
    }
    let u = kron(&params.ua, &params.ub);
    rho.conjugate_by(&u).frobenius_distance(&params.canonical_density())
}

/// Recovers the canonical parameters of a rank-≤2 state produced by a TKO
/// channel.
///
/// The top eigenvector `|ψ⟩` is Schmidt-decomposed; its local bases define
/// `U_A` and `U_B`. When the Schmidt coefficients are degenerate (phase
/// damping) the bases are not unique and the second eigenvector fixes them
/// instead: `H⊗H` is tried first, then a local rotation that aligns the
/// Pauli axis of the second eigenvector with `σ_x`.
pub fn canonical_decompose<T: Real>(rho: &ComplexMatrix<T>, tol: T) -> Result<CanonicalStateParams<T>> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension(format!(
            "expected a 4x4 density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let tr = rho.trace();
    if (tr.re - T::one()).abs() > tol.max(T::check_tol()) || tr.im.abs() > tol.max(T::check_tol()) {
        return Err(Error::InvalidDensity(format!("trace {tr}")));
    }
    let eig = eig_hermitian(rho)?;
    let rank_tol = T::check_tol().max(tol) * tr.re;
    if eig.values[2] > rank_tol || eig.values[3] < -rank_tol {
        return Err(Error::NotTkoState(format!(
            "spectrum {:?} is not that of a rank-2 state",
            eig.values.iter().map(|v| v.to_f64_lossy()).collect::<Vec<_>>()
        )));
    }
    let f = eig.values[0].min(T::one());
    if f <= T::half() + tol {
        return Err(Error::NonDistillable(f.to_f64_lossy()));
    }
    let psi = eig.vector(0);
    let phi = eig.vector(1);
    let h = T::FRAC_1_SQRT_2();

    if eig.values[1] <= tol {
        // Pure: only a maximally entangled |ψ⟩ = (I⊗W)|Φ⁺⟩ is reachable.
        let sf = schmidt(&psi, tol.max(T::check_tol()))?;
        if (sf.coeffs[0] - sf.coeffs[1]).abs() > tol.max(T::check_tol()) {
            return Err(Error::NotTkoState("pure state is not maximally entangled".into()));
        }
        let w = bob_operator(&psi);
        let params = CanonicalStateParams {
            f,
            alpha: h,
            beta: h,
            gamma: h,
            delta: h,
            theta: T::zero(),
            ua: ComplexMatrix::identity(2),
            ub: w.adjoint(),
        };
        return accept(params, rho, tol);
    }

    let sf = schmidt(&psi, tol.max(T::check_tol()))?;
    let rows = |a: &[Complex<T>], b: &[Complex<T>]| ComplexMatrix::from_fn(2, 2, |i, j| [a, b][i][j].conj());
    let schmidt_bases = (
        rows(&sf.basis_a[0], &sf.basis_a[1]),
        rows(&sf.basis_b[0], &sf.basis_b[1]),
    );
    let mut attempts: Vec<(ComplexMatrix<T>, ComplexMatrix<T>)> = Vec::new();
    if sf.coeffs[0] - sf.coeffs[1] <= T::lit(1e-6) {
        attempts.push((hadamard(), hadamard()));
        attempts.push(schmidt_bases);
        if let Some(pair) = pauli_alignment(&psi, &phi) {
            attempts.push(pair);
        }
    } else {
        attempts.push(schmidt_bases);
    }

    // First attempt within tolerance wins, so H⊗H is preferred whenever it
    // works; otherwise the closest attempt is reported.
    let limit = tol.max(T::check_tol());
    let mut best: Option<(T, CanonicalStateParams<T>)> = None;
    for (ua, ub) in attempts {
        let params = extract(f, &psi, &phi, ua, ub);
        let dev = verify_canonical(&params, rho);
        let dev = if dev.is_nan() { T::infinity() } else { dev };
        if dev <= limit {
            return Ok(params);
        }
        if best.as_ref().map_or(true, |(d, _)| dev < *d) {
            best = Some((dev, params));
        }
    }
    let (_, params) = best.expect("at least one attempt");
    accept(params, rho, tol)
}

fn accept<T: Real>(params: CanonicalStateParams<T>, rho: &ComplexMatrix<T>, tol: T) -> Result<CanonicalStateParams<T>> {
    let dev = verify_canonical(&params, rho);
    let limit = tol.max(T::check_tol());
    if dev <= limit {
        Ok(params)
    } else {
        Err(Error::NotTkoState(format!(
            "canonical form deviates by {}",
            dev.to_f64_lossy()
        )))
    }
}

/// `W = √2·Cᵀ` with `C` the coefficient matrix, so that `|ψ⟩ = (I⊗W)|Φ⁺⟩`.
fn bob_operator<T: Real>(psi: &[Complex<T>]) -> ComplexMatrix<T> {
    let s = T::SQRT_2();
    ComplexMatrix::from_fn(2, 2, |i, j| psi[2 * j + i] * s)
}

/// Reads `(α, β, γ, δ, θ)` off the rotated eigenvectors.
fn extract<T: Real>(
    f: T,
    psi: &[Complex<T>],
    phi: &[Complex<T>],
    ua: ComplexMatrix<T>,
    ub: ComplexMatrix<T>,
) -> CanonicalStateParams<T> {
    let u = kron(&ua, &ub);
    let mu = u.mat_vec(psi);
    let nu = u.mat_vec(phi);

    // Absorb the relative phase of |11⟩ in |μ⟩ into U_B so both amplitudes
    // are real non-negative.
    let (a, b) = (mu[0], mu[3]);
    let mut ub = ub;
    let mut nu = nu;
    if a.norm() > T::zero_tol() && b.norm() > T::zero_tol() {
        let rel = (a.conj() * b) / (a.norm() * b.norm());
        let fix = ComplexMatrix::diag(&[Complex::new(T::one(), T::zero()), rel.conj()]);
        ub = &fix * &ub;
        nu[1] = nu[1] * rel.conj();
        nu[3] = nu[3] * rel.conj();
    }

    let gamma = nu[1].norm();
    let delta = nu[2].norm();
    let theta = if gamma > T::zero_tol() && delta > T::zero_tol() {
        let t = (nu[2] * nu[1].conj()).arg();
        if t < T::zero() {
            t + T::TAU()
        } else {
            t
        }
    } else {
        T::zero()
    };
    // No weight on |01⟩, |10⟩ means these bases are wrong; keep the result
    // finite so verification rejects it.
    let scale = (gamma * gamma + delta * delta).sqrt().max(T::min_positive_value());
    CanonicalStateParams {
        f,
        alpha: a.norm(),
        beta: b.norm(),
        gamma: gamma / scale,
        delta: delta / scale,
        theta,
        ua,
        ub,
    }
}

/// Local unitaries for a maximally entangled `|ψ⟩`: map `|ψ⟩` to `|Φ⁺⟩`
/// and rotate `|φ⟩ = (I⊗e^{iχ} n·σ)|Φ⁺⟩` onto `|Ψ⁺⟩` with `O⊗O*`.
fn pauli_alignment<T: Real>(psi: &[Complex<T>], phi: &[Complex<T>]) -> Option<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let w = bob_operator(psi);
    let wd = w.adjoint();
    let to_phi = kron(&ComplexMatrix::identity(2), &wd);
    let phi0 = to_phi.mat_vec(phi);
    let m = bob_operator(&phi0);

    let i2 = Complex::new(T::zero(), T::two());
    let comps = [
        (m[(0, 1)] + m[(1, 0)]) * T::half(),
        (m[(1, 0)] - m[(0, 1)]) / i2,
        m[(0, 0)],
    ];
    let lead = comps
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal))?;
    if lead.norm() <= T::zero_tol() {
        return None;
    }
    let unphase = lead.conj() / lead.norm();
    let n: Vec<T> = comps.iter().map(|z| (*z * unphase).re).collect();
    let nn = n.iter().map(|x| *x * *x).sum::<T>().sqrt();
    let n: Vec<T> = n.iter().map(|x| *x / nn).collect();

    // Axis n × x̂ = (0, n_z, −n_y), angle acos(n_x).
    let axis = [T::zero(), n[2], -n[1]];
    let an = (axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let (axis, omega) = if an <= T::zero_tol() {
        if n[0] > T::zero() {
            return Some((ComplexMatrix::identity(2), wd));
        }
        ([T::zero(), T::zero(), T::one()], T::PI())
    } else {
        (
            [T::zero(), axis[1] / an, axis[2] / an],
            n[0].max(-T::one()).min(T::one()).acos(),
        )
    };
    let (cs, sn) = ((omega * T::half()).cos(), (omega * T::half()).sin());
    // Q = cos(ω/2)·I − i sin(ω/2)·(a·σ)
    let q = ComplexMatrix::from_row_major(
        2,
        2,
        vec![
            Complex::new(cs, -sn * axis[2]),
            Complex::new(-sn * axis[1], -sn * axis[0]),
            Complex::new(sn * axis[1], -sn * axis[0]),
            Complex::new(cs, sn * axis[2]),
        ],
    )
    .ok()?;
    Some((q.conj(), &q * &wd))
}
