use serde::Serialize;

use super::sweep::{sweep_eta, sweep_p, SweepPoint};
use crate::channel::CanonicalChannelParams;
use crate::distill::{run, Engine, Policy};
use crate::error::Result;

/// Fidelity threshold used by every figure preset.
pub const FIG_F_TH: f64 = 0.99;
/// Noise severity of the fidelity-versus-rounds figure.
pub const FIG2_P: f64 = 0.8;
/// Noise severity of the yield-versus-|η| figure.
pub const FIG4_P: f64 = 0.7;
/// Channels of the fidelity-versus-rounds figure as `(name, arcsin|η| / π)`.
pub const FIG2_CHANNELS: [(&str, f64); 3] = [("phase_damping", 0.0), ("midpoint", 0.25), ("amplitude_damping", 0.5)];

/// Fidelity of each policy after `round` rounds; empty once a trace has ended.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig2Row {
    pub channel: &'static str,
    pub p: f64,
    pub abs_eta: f64,
    pub round: usize,
    pub fp: Option<f64>,
    pub pp: Option<f64>,
    pub qpa: Option<f64>,
    pub bbpssw: Option<f64>,
}

/// Fidelity versus rounds at `p = 0.8` for phase damping, the midpoint
/// channel and amplitude damping.
pub fn figure2(max_rounds: usize) -> Result<Vec<Fig2Row>> {
    let mut rows = Vec::new();
    for (name, frac) in FIG2_CHANNELS {
        let abs_eta = (frac * std::f64::consts::PI).sin();
        let channel = CanonicalChannelParams::from_abs_eta(FIG2_P, abs_eta)?;
        let traces = Policy::ALL
            .iter()
            .map(|&pol| run(&channel, pol, FIG_F_TH, max_rounds, Engine::default_for(pol)))
            .collect::<Result<Vec<_>>>()?;
        let len = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
        for round in 0..len {
            let at = |i: usize| traces[i].records.get(round).map(|r| r.fidelity);
            rows.push(Fig2Row {
                channel: name,
                p: FIG2_P,
                abs_eta,
                round,
                fp: at(0),
                pp: at(1),
                qpa: at(2),
                bbpssw: at(3),
            });
        }
    }
    Ok(rows)
}

/// `p = 0, 0.01, …, 0.99`.
pub fn figure3_p_values() -> Vec<f64> {
    (0..100).map(|i| i as f64 / 100.0).collect()
}

/// `|η| = sin(iπ/200)` for `i = 0, …, 100`.
pub fn figure4_eta_values() -> Vec<f64> {
    (0..=100)
        .map(|i| (i as f64 * std::f64::consts::PI / 200.0).sin().min(1.0))
        .collect()
}

/// Yield versus `p` for amplitude damping.
pub fn figure3(max_rounds: usize) -> Vec<SweepPoint<f64>> {
    sweep_p(1.0, &figure3_p_values(), FIG_F_TH, &Policy::ALL, max_rounds)
}

/// Yield versus `|η|` at `p = 0.7`.
pub fn figure4(max_rounds: usize) -> Vec<SweepPoint<f64>> {
    sweep_eta(FIG4_P, &figure4_eta_values(), FIG_F_TH, &Policy::ALL, max_rounds)
}
