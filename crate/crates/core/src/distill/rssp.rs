use num_complex::Complex;

use super::Policy;
use crate::error::{Error, Result};
use crate::linalg::qubit::{kron, phi_plus};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::state::{CanonicalStateParams, StateCoefficients};

/// Bob's filter `M_B = diag(κ, 1)` and its complement `M_B̄ = diag(√(1−κ²), 0)`
/// with `κ = β/α`.
pub fn rssp_ops<T: Real>(alpha: T, beta: T) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    if !(alpha > T::zero()) || !(beta >= T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "rssp needs alpha > 0, beta >= 0 (got {alpha}, {beta})"
        )));
    }
    let kappa = beta / alpha;
    if kappa > T::one() + T::check_tol() {
        return Err(Error::InvalidParameter(format!(
            "rssp needs beta <= alpha (kappa = {kappa})"
        )));
    }
    let kappa = kappa.min(T::one());
    let mb = ComplexMatrix::diag_real(&[kappa, T::one()]);
    let mb_bar = ComplexMatrix::diag_real(&[(T::one() - kappa * kappa).sqrt(), T::zero()]);
    Ok((mb, mb_bar))
}

/// Result of applying Bob's filter to a canonical state.
#[derive(Clone, Debug)]
pub struct RsspOutcome<T> {
    /// Probability that the filter succeeds.
    pub p_s: T,
    /// Normalized post-filter state.
    pub rho_tilde: ComplexMatrix<T>,
    /// Frobenius distance between `rho_tilde` and the closed-form
    /// `F̃|Φ⁺⟩⟨Φ⁺| + (1−F̃)|ν̃⟩⟨ν̃|`.
    pub closed_form_deviation: T,
}

/// Applies `I⊗M_B` to a state already in canonical form and post-selects.
pub fn rssp_apply<T: Real>(
    rho_canonical: &ComplexMatrix<T>,
    params: &CanonicalStateParams<T>,
) -> Result<RsspOutcome<T>> {
    if rho_canonical.rows() != 4 || rho_canonical.cols() != 4 {
        return Err(Error::Dimension(format!(
            "rssp expects a 4x4 state, got {}x{}",
            rho_canonical.rows(),
            rho_canonical.cols()
        )));
    }
    let (mb, _) = rssp_ops(params.alpha, params.beta)?;
    let filtered = rho_canonical.conjugate_by(&kron(&ComplexMatrix::identity(2), &mb));
    let p_s = filtered.trace().re;
    if p_s <= T::prob_floor() {
        return Err(Error::Degenerate(format!("rssp success probability {p_s}")));
    }
    let rho_tilde = filtered.scale_real(T::one() / p_s);
    let closed = rssp_closed_form(&params.coefficients())?;
    let deviation = rho_tilde.frobenius_distance(&closed.density(params.theta));
    Ok(RsspOutcome {
        p_s,
        rho_tilde,
        closed_form_deviation: deviation,
    })
}

/// Closed-form filter statistics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RsspClosedForm<T> {
    pub p_s: T,
    pub f_tilde: T,
    /// `1 − F̃` evaluated without cancellation.
    pub infidelity_tilde: T,
    pub gamma_tilde: T,
    pub delta_tilde: T,
}

impl<T: Real> RsspClosedForm<T> {
    /// `F̃|Φ⁺⟩⟨Φ⁺| + (1−F̃)|ν̃⟩⟨ν̃|` with `|ν̃⟩ = γ̃|01⟩ + δ̃e^{iθ}|10⟩`.
    pub fn density(&self, theta: T) -> ComplexMatrix<T> {
        let z = Complex::new(T::zero(), T::zero());
        let nu = vec![
            z,
            Complex::new(self.gamma_tilde, T::zero()),
            Complex::from_polar(self.delta_tilde, theta),
            z,
        ];
        &ComplexMatrix::projector(&phi_plus()).scale_real(self.f_tilde)
            + &ComplexMatrix::projector(&nu).scale_real(self.infidelity_tilde)
    }
}

/// `P_s = 2F₀β² + (1−F₀)(γ² + β²δ²/α²)`, `F̃ = 2F₀α²β²/(2F₀α²β² + (1−F₀)S)`,
/// `γ̃ = αγ/√S`, `δ̃ = βδ/√S` with `S = α²γ² + β²δ²`.
pub fn rssp_closed_form<T: Real>(k: &StateCoefficients<T>) -> Result<RsspClosedForm<T>> {
    let (f, a, b, g, d) = (k.f, k.alpha, k.beta, k.gamma, k.delta);
    if !(a > T::zero()) {
        return Err(Error::InvalidParameter("rssp needs alpha > 0".into()));
    }
    let eps = T::one() - f;
    let (a2, b2, g2, d2) = (a * a, b * b, g * g, d * d);
    let s = a2 * g2 + b2 * d2;
    let mu_weight = T::two() * f * a2 * b2;
    let denom = mu_weight + eps * s;
    if denom <= T::prob_floor() {
        return Err(Error::Degenerate(format!("rssp success probability {}", denom / a2)));
    }
    let root_s = s.sqrt();
    let (gamma_tilde, delta_tilde) = if root_s > T::zero() {
        (a * g / root_s, b * d / root_s)
    } else {
        (T::zero(), T::one())
    };
    Ok(RsspClosedForm {
        p_s: (denom / a2).min(T::one()),
        f_tilde: mu_weight / denom,
        infidelity_tilde: eps * s / denom,
        gamma_tilde,
        delta_tilde,
    })
}

/// Closed-form statistics of RSSP followed by the first round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstRound<T> {
    /// Probability a pair survives the filter and the first round, per input pair.
    pub p1: T,
    pub f1: T,
    /// `1 − F₁` evaluated without cancellation.
    pub infidelity1: T,
}

/// `P₁` and `F₁` for the FP or PP first round, written in the original
/// coefficients `(F₀, α, β, γ, δ)`.
pub fn first_round_closed_form<T: Real>(k: &StateCoefficients<T>, policy: Policy) -> Result<FirstRound<T>> {
    let (f, a, b, g, d) = (k.f, k.alpha, k.beta, k.gamma, k.delta);
    if !(a > T::zero() && b > T::zero()) {
        return Err(Error::InvalidParameter("first round needs alpha, beta > 0".into()));
    }
    let eps = T::one() - f;
    let (a2, b2, g2, d2) = (a * a, b * b, g * g, d * d);
    let s = a2 * g2 + b2 * d2;
    let four = T::lit(4.0);
    let (p1, weight) = match policy {
        Policy::Fp => {
            let num = f * f * a2 * b2 * b2 + eps * eps * b2 * g2 * d2;
            let den = T::two() * f * a2 * b2 + eps * s;
            let q = (g * d) / (a * b);
            (num / den, q * q)
        }
        Policy::Pp => {
            let num = four * f * f * a2 * a2 * b2 * b2 + eps * eps * s * s;
            let den = four * f * a2 * a2 * b2 + T::two() * eps * a2 * s;
            let r = g2 / b2 + d2 / a2;
            (num / den, r * r / four)
        }
        other => return Err(Error::Unsupported(format!("no first-round closed form for {other}"))),
    };
    let bad = eps * eps * weight;
    let total = f * f + bad;
    Ok(FirstRound {
        p1,
        f1: f * f / total,
        infidelity1: bad / total,
    })
}
