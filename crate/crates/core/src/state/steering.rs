use num_complex::Complex;

use super::CanonicalStateParams;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Local filters that turn a Bell-diagonal canonical state into one with the
/// target's coefficients when both parties obtain the unbarred outcome.
#[derive(Clone, Debug)]
pub struct SteeringOperators<T> {
    pub ma: ComplexMatrix<T>,
    pub ma_bar: ComplexMatrix<T>,
    pub mb: ComplexMatrix<T>,
    pub mb_bar: ComplexMatrix<T>,
}

/// `M_A = diag(√(α₀γ₀/(β₀δ₀)), e^{iθ₀/2})`, `M_B = diag(e^{iθ₀/2}, √(β₀γ₀/(α₀δ₀)))`
/// and their complements.
pub fn steering_operators<T: Real>(target: &CanonicalStateParams<T>) -> Result<SteeringOperators<T>> {
    let (a, b, g, d) = (target.alpha, target.beta, target.gamma, target.delta);
    if g <= T::zero_tol() {
        return Err(Error::Unsupported("steering needs gamma > 0".into()));
    }
    if b <= T::zero() || d <= T::zero() || a <= T::zero() {
        return Err(Error::InvalidParameter("steering needs alpha, beta, delta > 0".into()));
    }
    let ra = (a * g) / (b * d);
    let rb = (b * g) / (a * d);
    if ra > T::one() + T::check_tol() || rb > T::one() + T::check_tol() {
        return Err(Error::InvalidParameter(
            "target violates gamma <= beta <= alpha <= delta".into(),
        ));
    }
    let (ra, rb) = (ra.min(T::one()), rb.min(T::one()));
    let z = Complex::new(T::zero(), T::zero());
    let half_phase = Complex::from_polar(T::one(), target.theta * T::half());
    let real = |x: T| Complex::new(x, T::zero());
    Ok(SteeringOperators {
        ma: ComplexMatrix::diag(&[real(ra.sqrt()), half_phase]),
        ma_bar: ComplexMatrix::diag(&[real((T::one() - ra).sqrt()), z]),
        mb: ComplexMatrix::diag(&[half_phase, real(rb.sqrt())]),
        mb_bar: ComplexMatrix::diag(&[z, real((T::one() - rb).sqrt())]),
    })
}

/// Fidelity of the Bell-diagonal source state that the steering operators
/// map onto the target: `F₀ / (F₀ + (1−F₀)γ₀δ₀/(α₀β₀))`.
pub fn steering_source_fidelity<T: Real>(target: &CanonicalStateParams<T>) -> T {
    let f = target.f;
    let ratio = (target.gamma * target.delta) / (target.alpha * target.beta);
    f / (f + (T::one() - f) * ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::state::StateCoefficients;

    fn target(f: f64, a2: f64, g2: f64, theta: f64) -> CanonicalStateParams<f64> {
        let k = StateCoefficients {
            f,
            alpha: a2.sqrt(),
            beta: (1.0 - a2).sqrt(),
            gamma: g2.sqrt(),
            delta: (1.0 - g2).sqrt(),
        };
        CanonicalStateParams::from_coefficients(k, theta)
    }

    #[test]
    fn fixed_point_is_identity() {
        let t = CanonicalStateParams::from_coefficients(StateCoefficients::bell_diagonal(0.8), 0.0);
        let s = steering_operators(&t).unwrap();
        assert!(s.ma.frobenius_distance(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(s.mb.frobenius_distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn steers_bell_diagonal_state_to_target() {
        let t = target(0.6, 0.7, 0.2, 0.9);
        let s = steering_operators(&t).unwrap();
        for (m, mb) in [(&s.ma, &s.ma_bar), (&s.mb, &s.mb_bar)] {
            let sum = &(&m.adjoint() * m) + &(&mb.adjoint() * mb);
            assert!(sum.frobenius_distance(&ComplexMatrix::identity(2)) < 1e-12);
        }
        let src = StateCoefficients::bell_diagonal(steering_source_fidelity(&t)).density(0.0);
        let out = src.conjugate_by(&kron(&s.ma, &s.mb));
        let out = out.scale_real(1.0 / out.trace().re);
        assert!(out.frobenius_distance(&t.canonical_density()) < 1e-9);
    }

    #[test]
    fn zero_gamma_is_unsupported() {
        let t = target(0.6, 5.0 / 6.0, 0.0, 0.0);
        assert!(matches!(steering_operators(&t), Err(Error::Unsupported(_))));
    }
}
