//! Reference values checked against independent computations.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tko_distill::analysis::{
    average_yield, convergence_ratios, optimal_fidelity_channel, optimal_fidelity_params, sweep_eta, sweep_p,
};
use tko_distill::channel::{kraus_from_params, CanonicalChannelParams};
use tko_distill::distill::{
    bbpssw_step, engine_discrepancy, first_round_closed_form, recurrence_analytic, round_exact, rssp_apply,
    rssp_closed_form, rssp_ops, run, DistillationTrace, Engine, Policy, RoundRecord,
};
use tko_distill::linalg::qubit::{fidelity, gaussian_matrix, kron, partial_trace, phi_plus, psi_plus};
use tko_distill::linalg::ComplexMatrix;
use tko_distill::state::{canonical_decompose, params_analytic, shared_state, CanonicalStateParams, StateCoefficients};

type M = ComplexMatrix<f64>;

fn channel(p: f64, e: f64) -> CanonicalChannelParams<f64> {
    CanonicalChannelParams::from_abs_eta(p, e).unwrap()
}

fn bell_mix(f: f64) -> M {
    &M::projector(&phi_plus()).scale_real(f) + &M::projector(&psi_plus()).scale_real(1.0 - f)
}

fn random_density(seed: u64) -> M {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: M = gaussian_matrix(&mut rng, 4, 4);
    let r = &g * &g.adjoint();
    r.scale_real(1.0 / r.trace().re)
}

fn ad_coefficients() -> StateCoefficients<f64> {
    StateCoefficients {
        f: 0.6,
        alpha: (5.0f64 / 6.0).sqrt(),
        beta: (1.0f64 / 6.0).sqrt(),
        gamma: 0.0,
        delta: 1.0,
    }
}

/// Source-pair block for target outcome `|m n⟩`, written out index by index.
fn branch_by_indices(rho: &M, m: usize, n: usize) -> M {
    M::from_fn(4, 4, |r, c| {
        let (a, b, a2, b2) = (r >> 1, r & 1, c >> 1, c & 1);
        let r2 = 2 * (m ^ a) + (n ^ b);
        let c2 = 2 * (m ^ a2) + (n ^ b2);
        rho[(r, c)] * rho[(r2, c2)]
    })
}

#[test]
fn exact_round_matches_index_formula() {
    for seed in 0..5 {
        let rho = random_density(seed);
        for policy in [Policy::Fp, Policy::Pp] {
            let out = round_exact(&rho, policy).unwrap();
            let kept: Vec<(usize, usize)> = if policy == Policy::Fp {
                vec![(1, 1)]
            } else {
                vec![(0, 0), (1, 1)]
            };
            let mut expected = M::zeros(4, 4);
            for (m, n) in kept {
                expected = &expected + &branch_by_indices(&rho, m, n);
            }
            let p = expected.trace().re;
            assert!((out.keep_prob - p / 2.0).abs() < 1e-14);
            assert!(out.state.frobenius_distance(&expected.scale_real(1.0 / p)) < 1e-13);
            for (i, &bp) in out.branch_probabilities.iter().enumerate() {
                assert!((bp - branch_by_indices(&rho, i >> 1, i & 1).trace().re).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn branch_probabilities_sum_to_one() {
    for seed in 10..20 {
        let out = round_exact(&random_density(seed), Policy::Pp).unwrap();
        assert!((out.branch_probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn werner_pp_round() {
    let out = round_exact(&bell_mix(0.75), Policy::Pp).unwrap();
    // (0.75² + 0.25²) / 2 and 0.75² / (0.75² + 0.25²)
    assert!((out.keep_prob - 0.3125).abs() < 1e-15);
    assert!((fidelity(&out.state) - 0.9).abs() < 1e-14);
    let fixed = round_exact(&bell_mix(1.0), Policy::Pp).unwrap();
    assert!((fixed.keep_prob - 0.5).abs() < 1e-15);
}

#[test]
fn rssp_filter_examples() {
    let (mb, mb_bar) = rssp_ops(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
    assert!(mb.frobenius_distance(&M::identity(2)) < 1e-15);
    assert!(mb_bar.frobenius_norm() < 1e-7);

    let k = ad_coefficients();
    let (mb, _) = rssp_ops(k.alpha, k.beta).unwrap();
    assert!((mb[(0, 0)].re - 1.0 / 5.0f64.sqrt()).abs() < 1e-15);

    // P_s = 2·0.6/6 + 0.4·(1/5) = 0.28 and F̃ = 0.1/(0.1 + 0.04) = 5/7.
    let c = rssp_closed_form(&k).unwrap();
    assert!((c.p_s - 0.28).abs() < 1e-15);
    assert!((c.f_tilde - 5.0 / 7.0).abs() < 1e-15);
    assert_eq!(c.gamma_tilde, 0.0);
    assert!((c.delta_tilde - 1.0).abs() < 1e-15);
}

#[test]
fn rssp_operator_application_matches_closed_form() {
    for &(p, e) in &[(0.3, 0.0), (0.8, 1.0), (0.5, 0.6), (0.9, 0.2)] {
        let rho = shared_state(&kraus_from_params(&channel(p, e))).unwrap();
        let params = canonical_decompose(&rho, 1e-9).unwrap();
        let rho_c = rho.conjugate_by(&kron(&params.ua, &params.ub));
        let out = rssp_apply(&rho_c, &params).unwrap();
        let c = rssp_closed_form(&params.coefficients()).unwrap();
        assert!((out.p_s - c.p_s).abs() < 1e-12, "p={p}");
        assert!(out.closed_form_deviation < 1e-9, "p={p}");
        // The μ component becomes |Φ⁺⟩ exactly.
        let phi = phi_plus::<f64>();
        let mu_weight = out.rho_tilde.expectation(&phi).re;
        assert!((mu_weight - c.f_tilde).abs() < 1e-12);
    }
    let pd = CanonicalStateParams::from_coefficients(StateCoefficients::bell_diagonal(0.7f64), 0.0);
    let out = rssp_apply(&pd.canonical_density(), &pd).unwrap();
    assert!((out.p_s - 1.0).abs() < 1e-15);
    assert!(out.rho_tilde.frobenius_distance(&pd.canonical_density()) < 1e-15);
}

#[test]
fn first_round_examples() {
    // Phase damping at p = 0.8: F₀ = (1 + √0.2)/2, PP gives F₀²/(F₀² + (1−F₀)²).
    let f0 = (1.0 + 0.2f64.sqrt()) / 2.0;
    let pp = first_round_closed_form(&params_analytic(0.8, 0.0).unwrap(), Policy::Pp).unwrap();
    assert!((pp.f1 - f0 * f0 / (f0 * f0 + (1.0 - f0).powi(2))).abs() < 1e-14);
    assert!((pp.f1 - 0.8727).abs() < 1e-4);

    let fp = first_round_closed_form(&ad_coefficients(), Policy::Fp).unwrap();
    assert_eq!(fp.f1, 1.0);
    // F₀²α²β⁴ / (2F₀α²β² + (1−F₀)β²δ²) = (1/120) / (7/30)
    assert!((fp.p1 - 1.0 / 28.0).abs() < 1e-15);
}

#[test]
fn fp_round_one_is_bell_diagonal_and_pp_keeps_block_structure() {
    for &(p, e) in &[(0.4, 0.3), (0.7, 0.9), (0.2, 0.0)] {
        let rho = shared_state(&kraus_from_params(&channel(p, e))).unwrap();
        let params = canonical_decompose(&rho, 1e-9).unwrap();
        let filtered = rssp_apply(&rho.conjugate_by(&kron(&params.ua, &params.ub)), &params).unwrap();

        let fp = round_exact(&filtered.rho_tilde, Policy::Fp).unwrap();
        let f1 = fidelity(&fp.state);
        assert!(fp.state.frobenius_distance(&bell_mix(f1)) < 1e-9, "p={p} e={e}");

        let pp = round_exact(&filtered.rho_tilde, Policy::Pp).unwrap();
        let s = &pp.state;
        let phi = phi_plus::<f64>();
        let phi_part = M::projector(&phi).scale_real(s.expectation(&phi).re);
        let rest = s - &phi_part;
        for (r, c) in [
            (0, 0),
            (0, 3),
            (3, 0),
            (3, 3),
            (0, 1),
            (0, 2),
            (3, 1),
            (3, 2),
            (1, 0),
            (2, 0),
            (1, 3),
            (2, 3),
        ] {
            assert!(rest[(r, c)].norm() < 1e-12, "p={p} e={e} ({r},{c})");
        }
    }
}

#[test]
fn bbpssw_examples() {
    let (f, p) = bbpssw_step(0.75f64).unwrap();
    let num = 0.75f64.powi(2) + 0.25f64.powi(2) / 9.0;
    let den = 0.75f64.powi(2) + 2.0 / 3.0 * 0.75 * 0.25 + 5.0 / 9.0 * 0.25f64.powi(2);
    assert!((f - num / den).abs() < 1e-15);
    assert!((p - den).abs() < 1e-15);
    assert_eq!(bbpssw_step(1.0f64).unwrap(), (1.0, 1.0));
}

#[test]
fn published_round_counts_and_sequences() {
    let ad = channel(0.8, 1.0);
    let fp = run(&ad, Policy::Fp, 0.99, 64, Engine::Analytic).unwrap();
    let pp = run(&ad, Policy::Pp, 0.99, 64, Engine::Analytic).unwrap();
    assert_eq!((fp.rounds(), pp.rounds()), (1, 3));
    assert!(fp.reached && pp.reached);

    let pd = channel(0.8, 0.0);
    let a = run(&pd, Policy::Fp, 0.99, 64, Engine::Analytic).unwrap();
    let b = run(&pd, Policy::Pp, 0.99, 64, Engine::Exact).unwrap();
    let q = run(&pd, Policy::Qpa, 0.99, 64, Engine::Exact).unwrap();
    for t in [&b, &q] {
        assert_eq!(t.records.len(), a.records.len());
        for (x, y) in t.records.iter().zip(&a.records) {
            assert!((x.fidelity - y.fidelity).abs() < 1e-9);
        }
    }
}

#[test]
fn engines_agree_on_grid() {
    for i in 1..=9 {
        for j in 0..=4 {
            let c = channel(i as f64 / 10.0, (j as f64 * PI / 8.0).sin());
            for policy in [Policy::Fp, Policy::Pp] {
                let a = run(&c, policy, 0.99, 64, Engine::Analytic).unwrap();
                let e = run(&c, policy, 0.99, 64, Engine::Exact).unwrap();
                assert!(engine_discrepancy(&a, &e) < 1e-9, "i={i} j={j} {policy}");
            }
        }
    }
}

#[test]
fn fp_round_one_equals_optimal_fidelity() {
    for i in 1..=9 {
        for j in 0..=4 {
            let (p, e) = (i as f64 / 10.0, (j as f64 * PI / 8.0).sin());
            let k = params_analytic(p, e).unwrap();
            let t = recurrence_analytic(&k, Policy::Fp, 1.0, 1).unwrap();
            let f1 = t.records[1].fidelity;
            assert!((f1 - optimal_fidelity_params(&k).unwrap()).abs() < 1e-12);
            assert!((optimal_fidelity_channel(p, e).unwrap() - optimal_fidelity_params(&k).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn yield_examples() {
    // Y₀ = P_s = 0.28, Y₁ = P₁ = 1/28, F₀ = 5/7, F₁ = 1.
    let t = run(&channel(0.8, 1.0), Policy::Fp, 0.99, 64, Engine::Analytic).unwrap();
    let r = average_yield(&t).unwrap();
    let (y0, y1) = (0.28, 1.0 / 28.0);
    let f0 = 5.0 / 7.0;
    let expected = (1.0 - 0.99) / (1.0 - f0) * y0 + (0.99 - f0) / (1.0 - f0) * y1;
    assert_eq!(r.rounds_used, 1);
    assert!((r.yield_at_k - y1).abs() < 1e-15);
    assert!((r.average_yield - expected).abs() < 1e-14);

    let pts = sweep_eta(0.7f64, &[0.0], 0.99, &[Policy::Fp, Policy::Pp], 64);
    let (fp, pp) = (
        pts[0].yield_of(Policy::Fp).unwrap(),
        pts[0].yield_of(Policy::Pp).unwrap(),
    );
    assert!((pp - 2.0 * fp).abs() < 1e-9);
    assert!((fp - 0.0730664).abs() < 1e-7);
}

fn trace_from(fids: &[f64], keeps: &[f64], th: f64) -> DistillationTrace<f64> {
    let mut cum = 1.0;
    let records = fids
        .iter()
        .zip(keeps)
        .enumerate()
        .map(|(i, (&f, &k))| {
            cum *= k;
            RoundRecord {
                round_index: i,
                fidelity: f,
                infidelity: 1.0 - f,
                keep_prob: k,
                cumulative_yield: cum,
            }
        })
        .collect();
    DistillationTrace {
        policy: Policy::Pp,
        records,
        threshold: th,
        reached: true,
    }
}

#[test]
fn average_yield_endpoints() {
    let t = trace_from(&[0.8, 0.9, 0.95], &[0.5, 0.4, 0.3], 0.9);
    let r = average_yield(&t).unwrap();
    assert_eq!(r.rounds_used, 1);
    assert_eq!(r.average_yield, 0.5 * 0.4);

    let t = trace_from(&[0.8, 0.9, 0.95], &[0.5, 0.4, 0.3], 0.95);
    assert!((average_yield(&t).unwrap().average_yield - 0.5 * 0.4 * 0.3).abs() < 1e-16);

    let t = trace_from(&[0.995], &[0.7], 0.99);
    assert_eq!(average_yield(&t).unwrap().average_yield, 0.7);

    let mut t = trace_from(&[0.8, 0.9], &[0.5, 0.4], 0.99);
    t.reached = false;
    assert!(average_yield(&t).is_err());
}

#[test]
fn ratios_at_exact_convergence_are_zero() {
    let t = trace_from(&[0.9, 1.0], &[1.0, 0.5], 0.99);
    let r = convergence_ratios(&t);
    assert_eq!((r[0].linear, r[0].quadratic), (0.0, 0.0));
}

#[test]
fn noiseless_point_has_unit_yield() {
    let pts = sweep_p(1.0, &[0.0], 0.99, &Policy::ALL, 64);
    for o in &pts[0].outcomes {
        assert_eq!(o.report.unwrap().average_yield, 1.0, "{}", o.policy);
    }
}

#[test]
fn bbpssw_start_is_bell_overlap_of_canonical_state() {
    let rho = shared_state(&kraus_from_params(&channel(0.6, 0.7))).unwrap();
    let params = canonical_decompose(&rho, 1e-9).unwrap();
    let overlap = rho
        .conjugate_by(&kron(&params.ua, &params.ub))
        .expectation(&phi_plus())
        .re;
    let t = run(&channel(0.6, 0.7), Policy::Bbpssw, 0.99, 64, Engine::Analytic).unwrap();
    assert!((t.records[0].fidelity - overlap).abs() < 1e-12);
}

#[test]
fn partial_trace_of_channel_state_marginal() {
    let e = Complex::from_polar(0.6, 0.4);
    let cp = CanonicalChannelParams::new(0.5f64, e, M::identity(2), M::identity(2)).unwrap();
    let rho = shared_state(&kraus_from_params(&cp)).unwrap();
    let bob = partial_trace(&rho, 2, &[1]).unwrap();
    let p = 0.5;
    let z = cp.zeta;
    let expected = M::from_row_major(
        2,
        2,
        vec![
            Complex::new(1.0 + e.norm_sqr() * p, 0.0) * 0.5,
            e * z * p * 0.5,
            e.conj() * z * p * 0.5,
            Complex::new(1.0 - p + z * z * p, 0.0) * 0.5,
        ],
    )
    .unwrap();
    assert!(bob.frobenius_distance(&expected) < 1e-14);
}
