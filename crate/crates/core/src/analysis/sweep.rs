use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{average_yield, YieldReport};
use crate::channel::CanonicalChannelParams;
use crate::distill::{run, Engine, Policy};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Result of one policy at one channel. A run that errors is recorded with
/// `error` set instead of aborting the sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolicyOutcome<T> {
    pub policy: Policy,
    pub rounds: usize,
    pub reached: bool,
    pub fidelity_final: Option<T>,
    pub report: Option<YieldReport<T>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint<T> {
    pub p: T,
    pub abs_eta: T,
    pub outcomes: Vec<PolicyOutcome<T>>,
}

impl<T: Real> SweepPoint<T> {
    pub fn outcome(&self, policy: Policy) -> Option<&PolicyOutcome<T>> {
        self.outcomes.iter().find(|o| o.policy == policy)
    }

    /// Average yield of `policy`, if it reached the threshold.
    pub fn yield_of(&self, policy: Policy) -> Option<T> {
        self.outcome(policy)?.report.map(|r| r.average_yield)
    }

    pub fn rows(&self, seed: u64) -> Vec<SweepRow> {
        self.outcomes
            .iter()
            .map(|o| SweepRow {
                p: self.p.to_f64_lossy(),
                abs_eta: self.abs_eta.to_f64_lossy(),
                policy: o.policy,
                rounds: o.rounds,
                reached: o.reached,
                fidelity_final: o.fidelity_final.map(|f| f.to_f64_lossy()),
                yield_avg: o.report.map(|r| r.average_yield.to_f64_lossy()),
                seed,
            })
            .collect()
    }
}

/// One line of sweep output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub abs_eta: f64,
    pub policy: Policy,
    pub rounds: usize,
    pub reached: bool,
    pub fidelity_final: Option<f64>,
    pub yield_avg: Option<f64>,
    pub seed: u64,
}

fn evaluate<T: Real>(p: T, abs_eta: T, f_th: T, policies: &[Policy], max_rounds: usize) -> SweepPoint<T> {
    let outcomes = policies
        .iter()
        .map(|&policy| {
            let trace = CanonicalChannelParams::from_abs_eta(p, abs_eta)
                .and_then(|c| run(&c, policy, f_th, max_rounds, Engine::default_for(policy)));
            match trace {
                Ok(t) => PolicyOutcome {
                    policy,
                    rounds: t.rounds(),
                    reached: t.reached,
                    fidelity_final: Some(t.final_fidelity()),
                    report: average_yield(&t).ok(),
                    error: None,
                },
                Err(e) => PolicyOutcome {
                    policy,
                    rounds: 0,
                    reached: false,
                    fidelity_final: None,
                    report: None,
                    error: Some(e.code().to_string()),
                },
            }
        })
        .collect();
    SweepPoint { p, abs_eta, outcomes }
}

/// Runs every policy at each `p` for a fixed `|η|`. Points run in parallel;
/// the output follows the input order.
pub fn sweep_p<T: Real>(
    abs_eta: T,
    p_values: &[T],
    f_th: T,
    policies: &[Policy],
    max_rounds: usize,
) -> Vec<SweepPoint<T>> {
    p_values
        .par_iter()
        .map(|&p| evaluate(p, abs_eta, f_th, policies, max_rounds))
        .collect()
}

/// Runs every policy at each `|η|` for a fixed `p`.
pub fn sweep_eta<T: Real>(
    p: T,
    eta_values: &[T],
    f_th: T,
    policies: &[Policy],
    max_rounds: usize,
) -> Vec<SweepPoint<T>> {
    eta_values
        .par_iter()
        .map(|&e| evaluate(p, e, f_th, policies, max_rounds))
        .collect()
}

/// CSV with a header row.
pub fn write_csv<S: Serialize, W: Write>(rows: &[S], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// JSON array followed by a newline.
pub fn write_json<S: Serialize, W: Write>(rows: &[S], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_are_recorded_not_thrown() {
        let pts = sweep_p(0.5f64, &[0.2, 1.0], 0.99, &[Policy::Fp], 16);
        assert_eq!(pts.len(), 2);
        assert!(pts[0].outcomes[0].reached);
        assert_eq!(pts[1].outcomes[0].error.as_deref(), Some("fully_destroyed"));
    }

    #[test]
    fn csv_has_fixed_columns() {
        let pts = sweep_eta(0.7f64, &[0.0], 0.99, &[Policy::Fp, Policy::Pp], 16);
        let mut buf = Vec::new();
        write_csv(&pts[0].rows(5), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("p,abs_eta,policy,rounds,reached,fidelity_final,yield_avg,seed")
        );
        assert!(lines.next().unwrap().starts_with("0.7,0.0,fp,"));
    }
}
