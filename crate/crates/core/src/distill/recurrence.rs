use super::rssp::{first_round_closed_form, rssp_closed_form};
use super::{check_run_args, DistillationTrace, Policy, TraceBuilder};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::StateCoefficients;

/// A PP round on `F|Φ⁺⟩⟨Φ⁺| + (1−F)·(span{|01⟩,|10⟩})`, tracking `ε = 1−F`
/// separately. Returns `(F', ε', P)` with `P = (F² + ε²)/2`.
pub fn pp_step<T: Real>(f: T, eps: T) -> (T, T, T) {
    let good = f * f;
    let bad = eps * eps;
    let total = good + bad;
    (good / total, bad / total, total * T::half())
}

/// One BBPSSW round on a Werner state of fidelity `F`: returns `(F', p_succ)`.
pub fn bbpssw_step<T: Real>(f: T) -> Result<(T, T)> {
    if !(f > T::half()) || f > T::one() + T::check_tol() {
        return Err(Error::NonDistillable(f.to_f64_lossy()));
    }
    let (f_next, _, p) = bbpssw_step_eps(f, T::one() - f);
    Ok((f_next, p))
}

/// BBPSSW round returning `(F', ε', p_succ)`.
pub(crate) fn bbpssw_step_eps<T: Real>(f: T, eps: T) -> (T, T, T) {
    let ninth = T::one() / T::lit(9.0);
    let num = f * f + ninth * eps * eps;
    let den = f * f + T::two() / T::lit(3.0) * f * eps + T::lit(5.0) * ninth * eps * eps;
    let bad = T::two() / T::lit(3.0) * f * eps + T::lit(4.0) * ninth * eps * eps;
    (num / den, bad / den, den)
}

/// Closed-form FP/PP trace: record 0 is the filtered state, record 1 the
/// policy-specific first round, later records PP rounds.
pub fn recurrence_analytic<T: Real>(
    k: &StateCoefficients<T>,
    policy: Policy,
    f_th: T,
    max_rounds: usize,
) -> Result<DistillationTrace<T>> {
    if !matches!(policy, Policy::Fp | Policy::Pp) {
        return Err(Error::Unsupported(format!("no closed-form recurrence for {policy}")));
    }
    check_run_args(f_th, max_rounds)?;
    if !(k.f > T::half()) {
        return Err(Error::NonDistillable(k.f.to_f64_lossy()));
    }

    let rssp = rssp_closed_form(k)?;
    let mut tb = TraceBuilder::new(policy, f_th);
    if tb.push(rssp.f_tilde, rssp.infidelity_tilde, rssp.p_s) {
        return Ok(tb.finish());
    }
    let first = first_round_closed_form(k, policy)?;
    let (mut f, mut eps) = (first.f1, first.infidelity1);
    if tb.push(f, eps, first.p1 / rssp.p_s) {
        return Ok(tb.finish());
    }
    for _ in 2..=max_rounds {
        let (f2, e2, p) = pp_step(f, eps);
        f = f2;
        eps = e2;
        if tb.push(f, eps, p) {
            break;
        }
    }
    Ok(tb.finish())
}

/// BBPSSW trace starting from `F_B = F(α+β)²/2`.
pub fn bbpssw_recurrence<T: Real>(
    k: &StateCoefficients<T>,
    f_th: T,
    max_rounds: usize,
) -> Result<DistillationTrace<T>> {
    check_run_args(f_th, max_rounds)?;
    let (f, eps) = bbpssw_initial(k);
    if !(f > T::half()) {
        return Err(Error::NonDistillable(f.to_f64_lossy()));
    }
    let mut tb = TraceBuilder::new(Policy::Bbpssw, f_th);
    let (mut f, mut eps) = (f, eps);
    if tb.push(f, eps, T::one()) {
        return Ok(tb.finish());
    }
    for _ in 1..=max_rounds {
        let (f2, e2, p) = bbpssw_step_eps(f, eps);
        f = f2;
        eps = e2;
        if tb.push(f, eps, p * T::half()) {
            break;
        }
    }
    Ok(tb.finish())
}

/// `(F(α+β)²/2, 1 − F(α+β)²/2)`, the overlap of the canonical state with
/// `|Φ⁺⟩`. The infidelity is written as `(1−F) + F(α−β)²/2`.
pub fn bbpssw_initial<T: Real>(k: &StateCoefficients<T>) -> (T, T) {
    let sum = k.alpha + k.beta;
    let diff = k.alpha - k.beta;
    (
        k.f * sum * sum * T::half(),
        (T::one() - k.f) + k.f * diff * diff * T::half(),
    )
}
