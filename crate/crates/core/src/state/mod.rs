//! The entangled state a TKO channel leaves behind and its canonical form
//! `F|μ⟩⟨μ| + (1−F)|ν⟩⟨ν|` with `|μ⟩ = α|00⟩ + β|11⟩` and
//! `|ν⟩ = γ|01⟩ + δe^{iθ}|10⟩`.

mod decompose;
mod steering;

pub use decompose::{canonical_decompose, verify_canonical};
pub use steering::{steering_operators, steering_source_fidelity, SteeringOperators};

use num_complex::Complex;

use crate::channel::{apply_to_second_qubit, KrausPair};
use crate::error::{Error, Result};
use crate::linalg::qubit::phi_plus;
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// The five real coefficients `(F, α, β, γ, δ)` of the canonical state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateCoefficients<T> {
    pub f: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

impl<T: Real> StateCoefficients<T> {
    /// Coefficients of `F|Φ⁺⟩⟨Φ⁺| + (1−F)|Ψ⁺⟩⟨Ψ⁺|`.
    pub fn bell_diagonal(f: T) -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            f,
            alpha: h,
            beta: h,
            gamma: h,
            delta: h,
        }
    }

    /// `F|μ⟩⟨μ| + (1−F)|ν⟩⟨ν|` for the given phase `θ`.
    pub fn density(&self, theta: T) -> ComplexMatrix<T> {
        let mu = self.mu();
        let nu = self.nu(theta);
        &ComplexMatrix::projector(&mu).scale_real(self.f) + &ComplexMatrix::projector(&nu).scale_real(T::one() - self.f)
    }

    pub fn mu(&self) -> Vec<Complex<T>> {
        let z = Complex::new(T::zero(), T::zero());
        vec![
            Complex::new(self.alpha, T::zero()),
            z,
            z,
            Complex::new(self.beta, T::zero()),
        ]
    }

    pub fn nu(&self, theta: T) -> Vec<Complex<T>> {
        let z = Complex::new(T::zero(), T::zero());
        vec![
            z,
            Complex::new(self.gamma, T::zero()),
            Complex::from_polar(self.delta, theta),
            z,
        ]
    }

    /// Largest violation among the normalization, ordering and marginal
    /// constraints the coefficients satisfy for every TKO channel with `p < 1`.
    pub fn invariant_violation(&self) -> T {
        let half = T::half();
        let h = T::FRAC_1_SQRT_2();
        let order = [
            self.gamma - self.beta,
            self.beta - h,
            h - self.alpha,
            self.alpha - self.delta,
        ]
        .into_iter()
        .fold(T::zero(), |m, x| m.max(x));
        [
            (self.alpha * self.alpha + self.beta * self.beta - T::one()).abs(),
            (self.gamma * self.gamma + self.delta * self.delta - T::one()).abs(),
            (self.f * self.alpha * self.alpha + (T::one() - self.f) * self.gamma * self.gamma - half).abs(),
            order,
        ]
        .into_iter()
        .fold(T::zero(), |m, x| m.max(x))
    }
}

/// `(F, α, β, γ, δ, θ, U_A, U_B)` such that
/// `(U_A⊗U_B) ρ (U_A⊗U_B)† = F|μ⟩⟨μ| + (1−F)|ν⟩⟨ν|`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalStateParams<T> {
    pub f: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    /// In `[0, 2π)`.
    pub theta: T,
    pub ua: ComplexMatrix<T>,
    pub ub: ComplexMatrix<T>,
}

impl<T: Real> CanonicalStateParams<T> {
    pub fn coefficients(&self) -> StateCoefficients<T> {
        StateCoefficients {
            f: self.f,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
        }
    }

    /// Parameters of an already canonical state (`U_A = U_B = I`).
    pub fn from_coefficients(k: StateCoefficients<T>, theta: T) -> Self {
        Self {
            f: k.f,
            alpha: k.alpha,
            beta: k.beta,
            gamma: k.gamma,
            delta: k.delta,
            theta,
            ua: ComplexMatrix::identity(2),
            ub: ComplexMatrix::identity(2),
        }
    }

    pub fn mu(&self) -> Vec<Complex<T>> {
        self.coefficients().mu()
    }

    pub fn nu(&self) -> Vec<Complex<T>> {
        self.coefficients().nu(self.theta)
    }

    /// The canonical two-term mixture.
    pub fn canonical_density(&self) -> ComplexMatrix<T> {
        self.coefficients().density(self.theta)
    }
}

/// `|Φ⁺⟩⟨Φ⁺|` after its second qubit passes through the channel.
pub fn shared_state<T: Real>(kp: &KrausPair<T>) -> Result<ComplexMatrix<T>> {
    apply_to_second_qubit(&ComplexMatrix::projector(&phi_plus()), kp)
}

/// Closed-form `(F, α, β, γ, δ)` for a channel with parameters `(p, |η|)`.
pub fn params_analytic<T: Real>(p: T, abs_eta: T) -> Result<StateCoefficients<T>> {
    if !(p >= T::zero()) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1)")));
    }
    if p >= T::one() {
        return Err(Error::FullyDestroyed(p.to_f64_lossy()));
    }
    if !(abs_eta >= T::zero() && abs_eta <= T::one()) {
        return Err(Error::InvalidParameter(format!("|eta| = {abs_eta} outside [0, 1]")));
    }
    if p == T::zero() {
        return Ok(StateCoefficients::bell_diagonal(T::one()));
    }
    let one = T::one();
    let e = abs_eta;
    let e2 = e * e;
    let x = (one - p) * (one - e2 * p);
    let s = x.sqrt();
    let f = T::half() * (one + s);
    // 1 − x = p(1 + |η|² − |η|²p); the factored forms below avoid the
    // cancellations in 1 − F and ½ − |η|p/(4(1−F)).
    let r = one + e2 - e2 * p;
    let alpha2 = (one + e * p + s) / (T::lit(4.0) * f);
    let beta2 = (one - e * p + s) / (T::lit(4.0) * f);
    let gamma2 = (one - e) * (one - e) * (one + s) / (T::two() * (one - e * p + s) * r);
    Ok(StateCoefficients {
        f,
        alpha: alpha2.sqrt(),
        beta: beta2.sqrt(),
        gamma: gamma2.max(T::zero()).sqrt(),
        delta: (one - gamma2).max(T::zero()).sqrt(),
    })
}

/// `1 − F` for the channel `(p, |η|)` without cancellation.
pub fn infidelity_analytic<T: Real>(p: T, abs_eta: T) -> T {
    let one = T::one();
    let e2 = abs_eta * abs_eta;
    let x = (one - p) * (one - e2 * p);
    T::half() * p * (one + e2 - e2 * p) / (one + x.sqrt())
}
