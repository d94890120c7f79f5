//! Channel-adaptive recurrence entanglement distillation for qubit channels
//! with two Kraus operators.
//!
//! The crate canonicalizes a two-Kraus-operator channel, decomposes the
//! entangled state it leaves behind, and runs the FP, PP, QPA and BBPSSW
//! recurrence protocols both through closed-form recurrences and through an
//! exact density-matrix engine. All numeric code is generic over [`Real`]
//! (`f32` or `f64`); the aliases below fix the scalar type.

// Negated comparisons are used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod distill;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod state;

pub use analysis::{
    average_yield, convergence_ratios, optimal_fidelity_channel, optimal_fidelity_params, random_locc_check, sweep_eta,
    sweep_p, ConvergenceRatio, SweepPoint, YieldReport,
};
pub use channel::{canonicalize, choi, kraus_from_params, ChannelSpec};
pub use distill::{run, DistillationTrace, Engine, Policy, RoundRecord};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use scalar::Real;
pub use state::{canonical_decompose, params_analytic, shared_state, StateCoefficients};

/// Double-precision aliases.
pub type Matrix = linalg::ComplexMatrix<f64>;
pub type KrausPair = channel::KrausPair<f64>;
pub type ChannelParams = channel::CanonicalChannelParams<f64>;
pub type StateParams = state::CanonicalStateParams<f64>;
pub type Trace = distill::DistillationTrace<f64>;

/// Single-precision aliases.
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type KrausPair32 = channel::KrausPair<f32>;
pub type ChannelParams32 = channel::CanonicalChannelParams<f32>;
pub type StateParams32 = state::CanonicalStateParams<f32>;
pub type Trace32 = distill::DistillationTrace<f32>;
