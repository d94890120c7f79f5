use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distill::rssp_ops;
use crate::error::Result;
use crate::linalg::qubit::{basis_ket, cnot, gaussian_matrix, kron};
use crate::linalg::{eig_hermitian, ComplexMatrix};
use crate::scalar::Real;
use crate::state::CanonicalStateParams;

/// Fidelity of the source pair kept after Alice applies `na` and Bob `nb` to
/// two copies of the canonical state. Each operator acts on the agent's two
/// qubits ordered (first pair, second pair).
pub fn locc_fidelity<T: Real>(params: &CanonicalStateParams<T>, na: &ComplexMatrix<T>, nb: &ComplexMatrix<T>) -> T {
    let terms = [
        (params.f.sqrt(), params.mu()),
        ((T::one() - params.f).max(T::zero()).sqrt(), params.nu()),
    ];
    let nb_t = nb.transpose();
    let half = T::half();
    let (mut num, mut den) = (T::zero(), T::zero());
    for (w1, x1) in &terms {
        for (w2, x2) in &terms {
            let w = *w1 * *w2;
            // X[(a1 a2), (b1 b2)] = x1[a1 b1] · x2[a2 b2]
            let x = ComplexMatrix::from_fn(4, 4, |r, c| {
                let (a1, a2, b1, b2) = (r >> 1, r & 1, c >> 1, c & 1);
                x1[2 * a1 + b1] * x2[2 * a2 + b2] * w
            });
            let y = &(na * &x) * &nb_t;
            for j in 0..2 {
                for l in 0..2 {
                    let s: Complex<T> = y[(j, l)] + y[(2 + j, 2 + l)];
                    num = num + s.norm_sqr() * half;
                }
            }
            den = den + y.frobenius_norm().powi(2);
        }
    }
    if den <= T::prob_floor() {
        T::zero()
    } else {
        num / den
    }
}

/// Alice's and Bob's kept-branch operators of the FP protocol: Bob's RSSP
/// filter on both pairs, the bilateral CNOT and the `|1⟩` outcome on the
/// target qubit.
pub fn fp_protocol_operators<T: Real>(
    params: &CanonicalStateParams<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let (mb, _) = rssp_ops(params.alpha, params.beta)?;
    let keep_one = kron(&ComplexMatrix::identity(2), &ComplexMatrix::projector(&basis_ket(2, 1)));
    let na = &keep_one * &cnot();
    let nb = &(&keep_one * &cnot()) * &kron(&mb, &mb);
    Ok((na, nb))
}

/// Largest kept-pair fidelity over `samples` random local operator pairs,
/// with the FP protocol's own operators included as one extra sample.
/// Operator entries are complex standard normal, scaled so `N†N ≤ I`.
pub fn random_locc_check<T: Real>(params: &CanonicalStateParams<T>, samples: usize, seed: u64) -> Result<T> {
    let (na, nb) = fp_protocol_operators(params)?;
    let mut best = locc_fidelity(params, &na, &nb);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let na = subnormalized(gaussian_matrix(&mut rng, 4, 4))?;
        let nb = subnormalized(gaussian_matrix(&mut rng, 4, 4))?;
        best = best.max(locc_fidelity(params, &na, &nb));
    }
    Ok(best)
}

fn subnormalized<T: Real>(n: ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let top = eig_hermitian(&(&n.adjoint() * &n))?.values[0];
    Ok(if top > T::zero() {
        n.scale_real(T::one() / top.sqrt())
    } else {
        n
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::optimal_fidelity_params;
    use crate::state::{params_analytic, StateCoefficients};

    #[test]
    fn fp_operators_attain_the_bound() {
        for &(p, e) in &[(0.3f64, 0.0f64), (0.8, 0.5), (0.6, 0.9)] {
            let k = params_analytic(p, e).unwrap();
            let cp = CanonicalStateParams::from_coefficients(k, 0.0);
            let (na, nb) = fp_protocol_operators(&cp).unwrap();
            let f = locc_fidelity(&cp, &na, &nb);
            assert!((f - optimal_fidelity_params(&k).unwrap()).abs() < 1e-12, "p={p} e={e}");
        }
    }

    #[test]
    fn random_samples_stay_below_bound() {
        let cp = CanonicalStateParams::from_coefficients(StateCoefficients::bell_diagonal(0.75f64), 0.0);
        let best = random_locc_check(&cp, 2000, 7).unwrap();
        assert!(best <= 0.9 + 1e-9);
        assert!((best - 0.9).abs() < 1e-12);
    }
}
