//! Recurrence distillation: closed-form recurrences and an exact
//! density-matrix engine for the same protocols.
//!
//! FP and PP filter each pair with Bob's RSSP measurement, run one
//! policy-specific round and then PP rounds. QPA applies `H⊗H` to the raw
//! shared state and runs PP rounds. BBPSSW iterates its Werner-state map
//! from the best Bell overlap of the canonical state.

mod exact;
mod recurrence;
mod rssp;

pub use exact::{branch_state, joint_after_cnots, round_exact, RoundOutcome};
pub use recurrence::{bbpssw_initial, bbpssw_recurrence, bbpssw_step, pp_step, recurrence_analytic};
pub use rssp::{
    first_round_closed_form, rssp_apply, rssp_closed_form, rssp_ops, FirstRound, RsspClosedForm, RsspOutcome,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{kraus_from_params, CanonicalChannelParams};
use crate::error::{Error, Result};
use crate::linalg::qubit::{fidelity, hadamard, infidelity, kron};
use crate::scalar::Real;
use crate::state::{canonical_decompose, params_analytic, shared_state};

/// Rounds whose fidelity gain is below this end a QPA run.
pub const PLATEAU_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Fp,
    Pp,
    Qpa,
    Bbpssw,
}

impl Policy {
    pub const ALL: [Policy; 4] = [Policy::Fp, Policy::Pp, Policy::Qpa, Policy::Bbpssw];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Fp => "fp",
            Policy::Pp => "pp",
            Policy::Qpa => "qpa",
            Policy::Bbpssw => "bbpssw",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown policy '{s}'")))
    }
}

/// How a trace is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Exact,
}

impl Engine {
    /// Exact for QPA, which has no closed form; analytic otherwise.
    pub fn default_for(policy: Policy) -> Self {
        match policy {
            Policy::Qpa => Engine::Exact,
            _ => Engine::Analytic,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Exact => "exact",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Engine::Analytic, Engine::Exact]
            .into_iter()
            .find(|e| e.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown engine '{s}'")))
    }
}

/// State of the kept pairs after one stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundRecord<T> {
    /// 0 is the state before any round.
    pub round_index: usize,
    pub fidelity: T,
    /// `1 − fidelity`, tracked separately so it stays accurate near 1.
    pub infidelity: T,
    /// Probability a pair entering this stage survives it, per input pair.
    pub keep_prob: T,
    /// Product of `keep_prob` up to and including this stage.
    pub cumulative_yield: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistillationTrace<T> {
    pub policy: Policy,
    pub records: Vec<RoundRecord<T>>,
    pub threshold: T,
    pub reached: bool,
}

impl<T: Real> DistillationTrace<T> {
    /// Index of the last round performed.
    pub fn rounds(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn last(&self) -> &RoundRecord<T> {
        self.records.last().expect("traces hold at least one record")
    }

    pub fn final_fidelity(&self) -> T {
        self.last().fidelity
    }

    pub fn fidelities(&self) -> Vec<T> {
        self.records.iter().map(|r| r.fidelity).collect()
    }
}

pub(crate) struct TraceBuilder<T> {
    trace: DistillationTrace<T>,
}

impl<T: Real> TraceBuilder<T> {
    pub(crate) fn new(policy: Policy, threshold: T) -> Self {
        Self {
            trace: DistillationTrace {
                policy,
                records: Vec::new(),
                threshold,
                reached: false,
            },
        }
    }

    /// Appends a record and reports whether it meets the threshold.
    pub(crate) fn push(&mut self, fidelity: T, infidelity: T, keep_prob: T) -> bool {
        let prev = self.trace.records.last().map_or(T::one(), |r| r.cumulative_yield);
        self.trace.records.push(RoundRecord {
            round_index: self.trace.records.len(),
            fidelity,
            infidelity,
            keep_prob,
            cumulative_yield: prev * keep_prob,
        });
        self.trace.reached = fidelity >= self.trace.threshold;
        self.trace.reached
    }

    fn last_fidelity(&self) -> T {
        self.trace.records.last().map_or(T::zero(), |r| r.fidelity)
    }

    pub(crate) fn finish(self) -> DistillationTrace<T> {
        self.trace
    }
}

pub(crate) fn check_run_args<T: Real>(f_th: T, max_rounds: usize) -> Result<()> {
    if !(f_th > T::half() && f_th <= T::one()) {
        return Err(Error::InvalidParameter(format!("threshold {f_th} outside (0.5, 1]")));
    }
    if max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    Ok(())
}

/// Runs `policy` on pairs shared through `channel` until the fidelity reaches
/// `f_th` or `max_rounds` rounds have been performed.
pub fn run<T: Real>(
    channel: &CanonicalChannelParams<T>,
    policy: Policy,
    f_th: T,
    max_rounds: usize,
    engine: Engine,
) -> Result<DistillationTrace<T>> {
    check_run_args(f_th, max_rounds)?;
    if !(channel.p < T::one()) {
        return Err(Error::FullyDestroyed(channel.p.to_f64_lossy()));
    }
    match (engine, policy) {
        (Engine::Analytic, Policy::Fp | Policy::Pp) => {
            let k = params_analytic(channel.p, channel.abs_eta().min(T::one()))?;
            recurrence_analytic(&k, policy, f_th, max_rounds)
        }
        (Engine::Analytic, Policy::Bbpssw) => {
            let k = params_analytic(channel.p, channel.abs_eta().min(T::one()))?;
            bbpssw_recurrence(&k, f_th, max_rounds)
        }
        (Engine::Exact, Policy::Fp | Policy::Pp) => run_exact_rssp(channel, policy, f_th, max_rounds),
        (Engine::Exact, Policy::Qpa) => run_exact_qpa(channel, f_th, max_rounds),
        (Engine::Analytic, Policy::Qpa) => Err(Error::Unsupported(
            "qpa does not preserve the state structure; use the exact engine".into(),
        )),
        (Engine::Exact, Policy::Bbpssw) => Err(Error::Unsupported(
            "bbpssw relies on twirling; use the analytic engine".into(),
        )),
    }
}

fn run_exact_rssp<T: Real>(
    channel: &CanonicalChannelParams<T>,
    policy: Policy,
    f_th: T,
    max_rounds: usize,
) -> Result<DistillationTrace<T>> {
    let rho = shared_state(&kraus_from_params(channel))?;
    let params = canonical_decompose(&rho, T::check_tol())?;
    let rho_c = rho.conjugate_by(&kron(&params.ua, &params.ub));
    let filtered = rssp_apply(&rho_c, &params)?;

    let mut tb = TraceBuilder::new(policy, f_th);
    let mut state = filtered.rho_tilde;
    if tb.push(fidelity(&state), infidelity(&state), filtered.p_s) {
        return Ok(tb.finish());
    }
    for round in 1..=max_rounds {
        let step = if round == 1 { policy } else { Policy::Pp };
        let out = round_exact(&state, step)?;
        state = out.state;
        if tb.push(fidelity(&state), infidelity(&state), out.keep_prob) {
            break;
        }
    }
    Ok(tb.finish())
}

fn run_exact_qpa<T: Real>(
    channel: &CanonicalChannelParams<T>,
    f_th: T,
    max_rounds: usize,
) -> Result<DistillationTrace<T>> {
    let rho = shared_state(&kraus_from_params(channel))?;
    let h = hadamard();
    let mut state = rho.conjugate_by(&kron(&h, &h));

    let mut tb = TraceBuilder::new(Policy::Qpa, f_th);
    if tb.push(fidelity(&state), infidelity(&state), T::one()) {
        return Ok(tb.finish());
    }
    let plateau = T::lit(PLATEAU_TOL);
    for _ in 1..=max_rounds {
        let before = tb.last_fidelity();
        let out = round_exact(&state, Policy::Qpa)?;
        state = out.state;
        let f = fidelity(&state);
        if tb.push(f, infidelity(&state), out.keep_prob) || f - before < plateau {
            break;
        }
    }
    Ok(tb.finish())
}

/// Largest per-record difference in fidelity or keep probability between two
/// traces; infinite when their lengths or outcomes differ.
pub fn engine_discrepancy<T: Real>(a: &DistillationTrace<T>, b: &DistillationTrace<T>) -> T {
    if a.records.len() != b.records.len() || a.reached != b.reached {
        return T::infinity();
    }
    a.records
        .iter()
        .zip(&b.records)
        .map(|(x, y)| (x.fidelity - y.fidelity).abs().max((x.keep_prob - y.keep_prob).abs()))
        .fold(T::zero(), T::max)
}
