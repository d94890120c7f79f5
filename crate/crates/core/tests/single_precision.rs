//! The pipeline runs in `f32` with correspondingly looser tolerances.

use tko_distill::analysis::average_yield;
use tko_distill::channel::{canonicalize, kraus_from_params};
use tko_distill::distill::{run, Engine, Policy};
use tko_distill::state::{canonical_decompose, params_analytic, shared_state};
use tko_distill::{ChannelParams32, Real};

#[test]
fn f32_pipeline_matches_f64() {
    let c32 = ChannelParams32::from_abs_eta(0.6, 0.5).unwrap();
    let back = canonicalize(&kraus_from_params(&c32)).unwrap();
    assert!((back.p - 0.6).abs() < 1e-5);

    let rho = shared_state(&kraus_from_params(&c32)).unwrap();
    let params = canonical_decompose(&rho, f32::check_tol()).unwrap();
    let k64 = params_analytic(0.6f64, 0.5).unwrap();
    assert!((params.f as f64 - k64.f).abs() < 1e-5);

    for policy in [Policy::Fp, Policy::Pp] {
        let a32 = run(&c32, policy, 0.99, 64, Engine::Exact).unwrap();
        let c64 = tko_distill::ChannelParams::from_abs_eta(0.6, 0.5).unwrap();
        let a64 = run(&c64, policy, 0.99, 64, Engine::Analytic).unwrap();
        assert_eq!(a32.rounds(), a64.rounds());
        let y32 = average_yield(&a32).unwrap().average_yield as f64;
        let y64 = average_yield(&a64).unwrap().average_yield;
        assert!((y32 - y64).abs() < 1e-4 * y64.max(1e-3), "{policy}: {y32} vs {y64}");
    }
}

#[test]
fn f32_amplitude_damping_round_counts() {
    let ad = ChannelParams32::from_abs_eta(0.8, 1.0).unwrap();
    assert_eq!(run(&ad, Policy::Fp, 0.99, 64, Engine::Analytic).unwrap().rounds(), 1);
    assert_eq!(run(&ad, Policy::Pp, 0.99, 64, Engine::Analytic).unwrap().rounds(), 3);
}
