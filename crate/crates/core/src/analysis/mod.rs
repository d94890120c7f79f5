//! Optimal fidelity, yield and convergence diagnostics, LOCC spot checks and
//! figure-data sweeps.

mod figures;
mod locc;
mod sweep;

pub use figures::{
    figure2, figure3, figure3_p_values, figure4, figure4_eta_values, Fig2Row, FIG2_CHANNELS, FIG2_P, FIG4_P, FIG_F_TH,
};
pub use locc::{fp_protocol_operators, locc_fidelity, random_locc_check};
pub use sweep::{sweep_eta, sweep_p, write_csv, write_json, PolicyOutcome, SweepPoint, SweepRow};

use serde::Serialize;

use crate::distill::{DistillationTrace, Policy};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::StateCoefficients;

/// Highest first-round fidelity any LOCC can reach from two copies of the
/// canonical state: `F² / (F² + (1−F)²(γδ/(αβ))²)`.
pub fn optimal_fidelity_params<T: Real>(k: &StateCoefficients<T>) -> Result<T> {
    if !(k.alpha > T::zero() && k.beta > T::zero()) {
        return Err(Error::InvalidParameter("optimal fidelity needs alpha, beta > 0".into()));
    }
    let q = (k.gamma * k.delta) / (k.alpha * k.beta);
    let eps = T::one() - k.f;
    Ok(k.f * k.f / (k.f * k.f + eps * eps * q * q))
}

/// The same bound in channel parameters: `½ + √(xy)/(x+y)` with `x = 1−p`
/// and `y = 1 − |η|²p`.
pub fn optimal_fidelity_channel<T: Real>(p: T, abs_eta: T) -> Result<T> {
    if !(p >= T::zero()) || !(abs_eta >= T::zero() && abs_eta <= T::one()) {
        return Err(Error::InvalidParameter(format!("(p, |eta|) = ({p}, {abs_eta})")));
    }
    if p >= T::one() {
        return Err(Error::FullyDestroyed(p.to_f64_lossy()));
    }
    let x = T::one() - p;
    let y = T::one() - abs_eta * abs_eta * p;
    Ok(T::half() + (x * y).sqrt() / (x + y))
}

/// Threshold-interpolated yield of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YieldReport<T> {
    pub policy: Policy,
    pub f_th: T,
    /// First round `K` whose fidelity meets the threshold.
    pub rounds_used: usize,
    pub yield_at_k: T,
    pub yield_at_k_minus_1: T,
    pub average_yield: T,
}

/// `((F_K − F_th)·Y_{K−1} + (F_th − F_{K−1})·Y_K) / (F_K − F_{K−1})`, where `K`
/// is the first round meeting the threshold. With `K = 0` the yield of the
/// starting record is returned.
pub fn average_yield<T: Real>(trace: &DistillationTrace<T>) -> Result<YieldReport<T>> {
    let f_th = trace.threshold;
    let k =
        trace.records.iter().position(|r| r.fidelity >= f_th).ok_or_else(|| {
            Error::NotReached(format!("{} ended at fidelity {}", trace.policy, trace.final_fidelity()))
        })?;
    let cur = &trace.records[k];
    if k == 0 {
        return Ok(YieldReport {
            policy: trace.policy,
            f_th,
            rounds_used: 0,
            yield_at_k: cur.cumulative_yield,
            yield_at_k_minus_1: cur.cumulative_yield,
            average_yield: cur.cumulative_yield,
        });
    }
    let prev = &trace.records[k - 1];
    let span = cur.fidelity - prev.fidelity;
    let average = if span > T::zero() {
        let w_prev = (cur.fidelity - f_th) / span;
        let w_cur = (f_th - prev.fidelity) / span;
        w_prev * prev.cumulative_yield + w_cur * cur.cumulative_yield
    } else {
        cur.cumulative_yield
    };
    Ok(YieldReport {
        policy: trace.policy,
        f_th,
        rounds_used: k,
        yield_at_k: cur.cumulative_yield,
        yield_at_k_minus_1: prev.cumulative_yield,
        average_yield: average,
    })
}

/// Infidelity ratios between consecutive records.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRatio<T> {
    pub round: usize,
    /// `1 − F` of the previous record.
    pub prev_infidelity: T,
    /// `(1−F_k)/(1−F_{k−1})`.
    pub linear: T,
    /// `(1−F_k)/(1−F_{k−1})²`.
    pub quadratic: T,
}

/// Ratios for every round `k ≥ 1`; both are 0 once `F_k` is exactly 1.
pub fn convergence_ratios<T: Real>(trace: &DistillationTrace<T>) -> Vec<ConvergenceRatio<T>> {
    trace
        .records
        .windows(2)
        .map(|w| {
            let (e0, e1) = (w[0].infidelity, w[1].infidelity);
            let (linear, quadratic) = if e1 <= T::zero() || e0 <= T::zero() {
                (T::zero(), T::zero())
            } else {
                (e1 / e0, e1 / (e0 * e0))
            };
            ConvergenceRatio {
                round: w[1].round_index,
                prev_infidelity: e0,
                linear,
                quadratic,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distill::{run, Engine};

    #[test]
    fn optimal_fidelity_examples() {
        let k = StateCoefficients::bell_diagonal(0.75f64);
        assert!((optimal_fidelity_params(&k).unwrap() - 0.9).abs() < 1e-15);
        let mut k0 = k;
        k0.gamma = 0.0;
        assert_eq!(optimal_fidelity_params(&k0).unwrap(), 1.0);
        assert_eq!(optimal_fidelity_channel(0.0f64, 0.3).unwrap(), 1.0);
        assert!((optimal_fidelity_channel(0.9f64, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            optimal_fidelity_channel(1.0f64, 0.3),
            Err(Error::FullyDestroyed(_))
        ));
    }

    #[test]
    fn fp_amplitude_damping_yield() {
        let c = crate::channel::CanonicalChannelParams::from_abs_eta(0.8f64, 1.0).unwrap();
        let t = run(&c, Policy::Fp, 0.99, 64, Engine::Analytic).unwrap();
        let r = average_yield(&t).unwrap();
        assert_eq!(r.rounds_used, 1);
        assert!((r.yield_at_k_minus_1 - 0.28).abs() < 1e-15);
        assert!((r.average_yield - 0.0442642857142857).abs() < 1e-12);
    }
}
