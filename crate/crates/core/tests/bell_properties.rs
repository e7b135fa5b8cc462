use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};
use stochgrav_core::background::SpectrumParams;
use stochgrav_core::bell::*;
use stochgrav_core::deviation::PhaseStatsParams;
use stochgrav_core::exec::Sequential;

fn model(kind: ModelKind) -> CorrelationModel {
    CorrelationModel::new(kind)
}

/// Mean of `sign(cosΦ)·sign(cos(Φ+θ))` on a dense midpoint grid.
fn brute_sign(theta: f64, n: usize) -> f64 {
    let s = |x: f64| if x >= 0.0 { 1.0 } else { -1.0 };
    (0..n)
        .map(|i| {
            let p = TAU * (i as f64 + 0.5) / n as f64;
            s(p.cos()) * s((p + theta).cos())
        })
        .sum::<f64>()
        / n as f64
}

#[test]
fn sawtooth_matches_brute_force() {
    for i in 0..=64 {
        let t = -PI + TAU * i as f64 / 64.0;
        assert!((sawtooth(t) - brute_sign(t, 1 << 20)).abs() < 1e-5, "theta {t}");
    }
}

#[test]
fn sign_model_reference_settings_by_brute_force() {
    let s = MeasurementSettings::default();
    let m = s.thetas().map(|t| brute_sign(t, 10_000_000));
    assert!((chsh(m) - 1.0).abs() < 1e-6);
}

#[test]
fn quadrature_agrees_with_closed_form_on_grid() {
    for rho in [1.0, 2.0] {
        let d = PhaseDistribution::Constant { rho };
        for i in 0..100 {
            let t = -PI + TAU * i as f64 / 99.0;
            let q = correlation_quadrature(t, &d).unwrap();
            assert!((q - 0.5 * rho * t.cos()).abs() < 1e-10);
        }
    }
}

#[test]
fn montecarlo_agrees_with_analytic() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for kind in ModelKind::ALL {
        let m = model(kind);
        for i in 0..20 {
            let t = TAU * rng.random::<f64>() - PI;
            let e = correlation_montecarlo(t, &m, 1_000_000, 100 + i, &Sequential).unwrap();
            let a = m.correlation(t).unwrap();
            assert!((e.value - a).abs() <= 3.0 * e.std_error, "{kind} theta {t}: {} vs {a} (se {})", e.value, e.std_error);
        }
    }
}

#[test]
fn montecarlo_reference_value() {
    let r = bell_observable(&MeasurementSettings::default(), &model(ModelKind::CosineProjection), Method::MonteCarlo { n: 1_000_000, seed: 7 }, &Sequential).unwrap();
    assert!((r.s_value - SQRT_2).abs() < 3.0 * r.std_error);
    assert_eq!(r.s_value, r.recompute());
    let e = correlation_montecarlo(FRAC_PI_2, &model(ModelKind::DeterministicSign), 1_000_000, 3, &Sequential).unwrap();
    assert!(e.value.abs() < 3.0 * e.std_error);
}

#[test]
fn bound_hierarchy() {
    let sign = maximize_bell(&model(ModelKind::DeterministicSign), 32).unwrap();
    let cos = maximize_bell(&model(ModelKind::CosineProjection), 32).unwrap();
    let q = maximize_bell(&model(ModelKind::QuantumReference), 32).unwrap();
    assert!((sign.s_value - 1.0).abs() < 1e-6);
    assert!((cos.s_value - SQRT_2).abs() < 1e-6);
    assert!((q.s_value - SQRT_2).abs() < 1e-6);
    for kind in [ModelKind::DeterministicSign, ModelKind::CosineProjection] {
        let r = bound_check(&model(kind), 10_000, 4).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_observed <= r.bound + 1e-9);
    }
}

#[test]
fn bridge_uniform_matches_montecarlo() {
    let d = PhaseDistribution::default();
    let b = phase_source_bridge(&UniformPhases, &d, 0.9, 200_000, 5).unwrap();
    let m = correlation_montecarlo(0.9, &model(ModelKind::CosineProjection), 200_000, 6, &Sequential).unwrap();
    let se = b.estimate.std_error.hypot(m.std_error);
    assert!((b.estimate.value - m.value).abs() < 3.0 * se);
    assert!(b.uniformity < 0.01);
}

#[test]
fn bridge_background_phases_recover_cosine() {
    let params = PhaseStatsParams {
        n_modes: 8,
        spectrum: SpectrumParams::new(1.0, 2.0, 0.0, 4e-3),
        window: 100.0,
        grid_steps: 3200,
        position: [0.0; 3],
        n_realizations: 0,
        seed: 0,
        fixed_sub_seed: false,
    };
    let provider = BackgroundPhases { params, exec: &Sequential };
    let theta = 0.7;
    let r = phase_source_bridge(&provider, &PhaseDistribution::default(), theta, 1000, 11).unwrap();
    assert!((r.estimate.value - theta.cos()).abs() < 3.0 * r.estimate.std_error, "{r:?}");
    assert!(r.uniformity < 0.1, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn global_rotation_leaves_s_unchanged(
        angles in prop::array::uniform4(0.0..TAU),
        delta in -10.0..10.0f64,
    ) {
        let s = MeasurementSettings::from_array(angles);
        for kind in ModelKind::ALL {
            let m = model(kind);
            let a = bell_observable(&s, &m, Method::Analytic, &Sequential).unwrap();
            let b = bell_observable(&s.rotated(delta), &m, Method::Analytic, &Sequential).unwrap();
            prop_assert!((a.s_value - b.s_value).abs() < 1e-12);
            prop_assert_eq!(a.s_value, a.recompute());
        }
    }

    #[test]
    fn correlation_is_linear_in_rho(rho in 0.0..10.0f64, theta in -PI..PI) {
        let m = correlation_analytic(theta, &PhaseDistribution::Constant { rho }).unwrap();
        let unit = correlation_analytic(theta, &PhaseDistribution::Constant { rho: 1.0 }).unwrap();
        prop_assert!((m - rho * unit).abs() < 1e-14 * (1.0 + rho));
        let s = MeasurementSettings::default();
        let cm = CorrelationModel::with_distribution(ModelKind::CosineProjection, PhaseDistribution::Constant { rho }).unwrap();
        let r = bell_observable(&s, &cm, Method::Analytic, &Sequential).unwrap();
        prop_assert!((r.s_value - rho / 2.0 * SQRT_2).abs() < 1e-12 * (1.0 + rho));
    }
}
