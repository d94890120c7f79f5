use super::Policy;
use crate::error::{Error, Result};
use crate::linalg::qubit::{basis_ket, check_density, cnot, kron, partial_trace, swap_qubits};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// One round of the exact engine.
#[derive(Clone, Debug)]
pub struct RoundOutcome<T> {
    /// Probabilities of the target outcomes `|m n⟩`, indexed `2m + n`.
    pub branch_probabilities: [T; 4],
    /// Probability of the kept branches divided by two (two pairs in, one out).
    pub keep_prob: T,
    /// Normalized state of the kept source pair.
    pub state: ComplexMatrix<T>,
}

/// `P(ρ⊗ρ)P†` with qubits reordered to `(A1, A2, B1, B2)`, followed by a
/// CNOT on each agent's two qubits with the source pair as control.
pub fn joint_after_cnots<T: Real>(pair_state: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let joint = kron(pair_state, pair_state).conjugate_by(&swap_qubits(4, 2, 3));
    let c = cnot();
    joint.conjugate_by(&kron(&c, &c))
}

/// Unnormalized source-pair state for the target outcome `|m n⟩`.
pub fn branch_state<T: Real>(joint: &ComplexMatrix<T>, m: usize, n: usize) -> Result<ComplexMatrix<T>> {
    let id = ComplexMatrix::identity(2);
    let pm = ComplexMatrix::projector(&basis_ket(2, m));
    let pn = ComplexMatrix::projector(&basis_ket(2, n));
    let proj = kron(&kron(&kron(&id, &pm), &id), &pn);
    partial_trace(&(&(&proj * joint) * &proj), 4, &[2, 4])
}

/// Bilateral CNOT, target measurement and post-selection on two copies of
/// `pair_state`. FP keeps outcome `11`; PP and QPA keep `00` and `11`.
pub fn round_exact<T: Real>(pair_state: &ComplexMatrix<T>, policy: Policy) -> Result<RoundOutcome<T>> {
    let keep: &[(usize, usize)] = match policy {
        Policy::Fp => &[(1, 1)],
        Policy::Pp | Policy::Qpa => &[(0, 0), (1, 1)],
        Policy::Bbpssw => {
            return Err(Error::Unsupported(
                "the exact engine does not model bbpssw twirling".into(),
            ))
        }
    };
    check_density(pair_state, 2, T::check_tol())?;

    let joint = joint_after_cnots(pair_state);
    let mut probs = [T::zero(); 4];
    let mut kept = ComplexMatrix::zeros(4, 4);
    for m in 0..2 {
        for n in 0..2 {
            let b = branch_state(&joint, m, n)?;
            probs[2 * m + n] = b.trace().re;
            if keep.contains(&(m, n)) {
                kept = &kept + &b;
            }
        }
    }
    let p_keep = kept.trace().re;
    if p_keep <= T::prob_floor() {
        return Err(Error::Degenerate(format!("kept-branch probability {p_keep}")));
    }
    Ok(RoundOutcome {
        branch_probabilities: probs,
        keep_prob: p_keep * T::half(),
        state: kept.scale_real(T::one() / p_keep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qubit::{fidelity, phi_plus, psi_plus};

    fn werner_like(f: f64) -> ComplexMatrix<f64> {
        &ComplexMatrix::projector(&phi_plus()).scale_real(f)
            + &ComplexMatrix::projector(&psi_plus()).scale_real(1.0 - f)
    }

    #[test]
    fn bell_state_is_fixed_point() {
        let o = round_exact(&werner_like(1.0), Policy::Pp).unwrap();
        assert!((o.keep_prob - 0.5).abs() < 1e-15);
        assert!(o.state.frobenius_distance(&werner_like(1.0)) < 1e-14);
    }

    #[test]
    fn pp_on_bell_diagonal_state() {
        let o = round_exact(&werner_like(0.75), Policy::Pp).unwrap();
        assert!((fidelity(&o.state) - 0.9).abs() < 1e-14);
        assert!((o.keep_prob - 0.3125).abs() < 1e-15);
        assert!((o.branch_probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fp_keeps_half_of_pp_on_bell_diagonal_state() {
        let fp = round_exact(&werner_like(0.75), Policy::Fp).unwrap();
        assert!((fp.keep_prob - 0.3125 / 2.0).abs() < 1e-15);
        assert!((fidelity(&fp.state) - 0.9).abs() < 1e-14);
    }

    #[test]
    fn bbpssw_is_unsupported() {
        assert!(matches!(
            round_exact(&werner_like(0.8), Policy::Bbpssw),
            Err(Error::Unsupported(_))
        ));
    }
}
