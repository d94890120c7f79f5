//! Two-Kraus-operator qubit channels: validation, the canonical normal form,
//! Choi matrices and the action on one half of a two-qubit state.

mod canonical;
pub mod spec;

pub use canonical::{canonicalize, canonicalize_or_unitary};
pub use spec::{CanonicalSpec, ChannelSpec};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::qubit::{check_density, kron, phi_plus};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Kraus operators `{C1, C2}` of a qubit channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausPair<T> {
    pub c1: ComplexMatrix<T>,
    pub c2: ComplexMatrix<T>,
}

/// Outcome of a completeness check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validation<T> {
    pub ok: bool,
    /// Frobenius norm of `C1†C1 + C2†C2 − I`.
    pub deviation: T,
}

impl<T: Real> KrausPair<T> {
    /// Pairs two 2×2 operators; completeness is not checked here.
    pub fn new(c1: ComplexMatrix<T>, c2: ComplexMatrix<T>) -> Result<Self> {
        for m in [&c1, &c2] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::Dimension(format!(
                    "Kraus operator must be 2x2, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(Error::InvalidParameter("non-finite Kraus entry".into()));
            }
        }
        Ok(Self { c1, c2 })
    }

    pub fn identity() -> Self {
        Self {
            c1: ComplexMatrix::identity(2),
            c2: ComplexMatrix::zeros(2, 2),
        }
    }

    pub fn completeness_deviation(&self) -> T {
        let sum = &(&self.c1.adjoint() * &self.c1) + &(&self.c2.adjoint() * &self.c2);
        sum.frobenius_distance(&ComplexMatrix::identity(2))
    }

    pub fn validate(&self) -> Validation<T> {
        let deviation = self.completeness_deviation();
        Validation {
            ok: deviation <= T::check_tol(),
            deviation,
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.ok {
            Ok(())
        } else {
            Err(Error::Incomplete(v.deviation.to_f64_lossy()))
        }
    }

    /// `C̃_i = Σ_j a_ij C_j`; describes the same channel when `a` is unitary.
    pub fn remix(&self, a: &ComplexMatrix<T>) -> Self {
        let mix = |x: Complex<T>, y: Complex<T>| &self.c1.scale(x) + &self.c2.scale(y);
        Self {
            c1: mix(a[(0, 0)], a[(0, 1)]),
            c2: mix(a[(1, 0)], a[(1, 1)]),
        }
    }

    pub fn operators(&self) -> [&ComplexMatrix<T>; 2] {
        [&self.c1, &self.c2]
    }
}

/// Normal form `C1 = U·diag(1, √(1−p))·V†`, `C2 = U·[[0, η√p], [0, ζ√p]]·V†`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalChannelParams<T> {
    pub p: T,
    pub eta: Complex<T>,
    pub zeta: T,
    pub u: ComplexMatrix<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> CanonicalChannelParams<T> {
    /// Validated constructor; `zeta` is derived from `|eta|`.
    pub fn new(p: T, eta: Complex<T>, u: ComplexMatrix<T>, v: ComplexMatrix<T>) -> Result<Self> {
        let tol = T::check_tol();
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
        }
        let abs_eta = eta.norm();
        if !(abs_eta <= T::one() + tol) {
            return Err(Error::InvalidParameter(format!("|eta| = {abs_eta} exceeds 1")));
        }
        for (name, m) in [("u", &u), ("v", &v)] {
            if m.rows() != 2 || m.cols() != 2 || !m.is_unitary(tol) {
                return Err(Error::InvalidParameter(format!("{name} is not a 2x2 unitary")));
            }
        }
        let eta = if abs_eta > T::one() { eta / abs_eta } else { eta };
        let zeta = (T::one() - eta.norm_sqr()).max(T::zero()).sqrt();
        Ok(Self { p, eta, zeta, u, v })
    }

    /// Canonical channel with real `η = abs_eta` and `U = V = I`.
    pub fn from_abs_eta(p: T, abs_eta: T) -> Result<Self> {
        if !(abs_eta >= T::zero()) {
            return Err(Error::InvalidParameter(format!("|eta| = {abs_eta} is negative")));
        }
        Self::new(
            p,
            Complex::new(abs_eta, T::zero()),
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2),
        )
    }

    pub fn abs_eta(&self) -> T {
        self.eta.norm()
    }
}

/// The Kraus pair of the normal form.
pub fn kraus_from_params<T: Real>(cp: &CanonicalChannelParams<T>) -> KrausPair<T> {
    let z = Complex::new(T::zero(), T::zero());
    let sp = cp.p.sqrt();
    let d1 = ComplexMatrix::diag_real(&[T::one(), (T::one() - cp.p).max(T::zero()).sqrt()]);
    let d2 = ComplexMatrix::from_row_major(2, 2, vec![z, cp.eta * sp, z, Complex::new(cp.zeta * sp, T::zero())])
        .expect("2x2 entries");
    let vh = cp.v.adjoint();
    KrausPair {
        c1: &(&cp.u * &d1) * &vh,
        c2: &(&cp.u * &d2) * &vh,
    }
}

fn apply_unchecked<T: Real>(rho: &ComplexMatrix<T>, kp: &KrausPair<T>) -> ComplexMatrix<T> {
    let id = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::zeros(4, 4);
    for c in kp.operators() {
        out = &out + &rho.conjugate_by(&kron(&id, c));
    }
    out
}

/// `Σ_k (I⊗C_k) |Φ⁺⟩⟨Φ⁺| (I⊗C_k)†`.
pub fn choi<T: Real>(kp: &KrausPair<T>) -> ComplexMatrix<T> {
    apply_unchecked(&ComplexMatrix::projector(&phi_plus()), kp)
}

/// Sends the second qubit of `rho0` through the channel.
pub fn apply_to_second_qubit<T: Real>(rho0: &ComplexMatrix<T>, kp: &KrausPair<T>) -> Result<ComplexMatrix<T>> {
    check_density(rho0, 2, T::check_tol())?;
    kp.ensure_valid()?;
    Ok(apply_unchecked(rho0, kp))
}
