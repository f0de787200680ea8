//! Analytic identities checked across randomly drawn economies.
//!
//! Every closed form in the library is tied to its neighbours by an exact
//! relation: the free boundary pastes the two debt curves together, market
//! debt peaks at par, equity doubles the refinancing option, and the
//! perpetual-debt value equals the discounted expected redemption flow.
//! These tests draw economies at random and verify the relations to tight
//! relative tolerances, so a regression in any one module breaks loudly here.

use credit_cycle::cycle::{
    cycle_points, default_probabilities, divergence_scale, equilibrium_point, excess_money,
    CyclePoints,
};
use credit_cycle::numeric::integrate;
use credit_cycle::sim::expected_money;
use credit_cycle::valuation::{
    expected_debt, new_debt_option, ode_residual_expected_debt, ode_residual_new_debt,
    valuation_snapshot,
};
use credit_cycle::{CharacteristicRoots, ModelParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative error with a floor of 1 on the denominator.
fn rel(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs().max(1.0)
}

/// Draw an economy with rates and volatility in the ranges where the
/// credit cycle is well posed (positive rates, finite collapse point).
fn draw_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let r = rng.random_range(0.01..0.12);
    let delta = rng.random_range(0.01..0.10);
    let a = rng.random_range(0.001..0.05);
    let sigma = rng.random_range(0.10..0.50);
    let par = rng.random_range(50.0..500.0);
    let s0 = 0.5 * delta * par; // strictly below the equilibrium point
    ModelParams::new(r, delta, a, sigma, par, s0).expect("draw ranges are valid")
}

fn draw_cycle(rng: &mut ChaCha8Rng) -> (ModelParams, CyclePoints) {
    let params = draw_params(rng);
    let points = cycle_points(&params).expect("drawn economies have a full cycle");
    (params, points)
}

#[test]
fn free_boundary_identities_hold_for_random_economies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (params, points) = draw_cycle(&mut rng);
        let (k, beta) = (points.k, points.beta);

        // The equilibrium point is where expected debt reaches par.
        assert!(rel(expected_debt(&params, points.s_hat), params.par) < 1e-12);

        // Value matching: B(s*) - f(s*) = F.
        let b_star = expected_debt(&params, points.s_star);
        let f_star = new_debt_option(k, beta, points.s_star);
        assert!(
            rel(b_star - f_star, params.par) < 1e-9,
            "value matching failed: B={b_star} f={f_star} F={}",
            params.par
        );

        // Smooth pasting: B'(s*) = f'(s*).
        let b_slope = 1.0 / params.delta;
        let f_slope = k * beta * points.s_star.powf(beta - 1.0);
        assert!(
            (b_slope - f_slope).abs() <= 1e-9 * b_slope,
            "smooth pasting failed: B'={b_slope} f'={f_slope}"
        );

        // Collapse: the refinancing option swallows the whole debt value.
        let b_tilde = expected_debt(&params, points.s_tilde);
        let f_tilde = new_debt_option(k, beta, points.s_tilde);
        assert!(
            (b_tilde - f_tilde).abs() <= 1e-9 * b_tilde,
            "collapse point failed: B={b_tilde} f={f_tilde}"
        );

        // Market debt equals par exactly at the critical point.
        let snap = valuation_snapshot(&params, &points, points.s_star).unwrap();
        assert!(rel(snap.market_debt, params.par) < 1e-9);
    }
}

#[test]
fn equity_doubles_the_option_and_par_erodes_in_stages() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let (params, points) = draw_cycle(&mut rng);
        for i in 1..=200 {
            let s = points.s_tilde * 1.2 * i as f64 / 200.0;
            let snap = valuation_snapshot(&params, &points, s).unwrap();
            let f = snap.new_debt;
            assert!(snap.market_debt >= 0.0 && snap.guarantee >= 0.0);
            if s < points.s_tilde {
                // Pre-collapse: A = B + f, so E = A - D = 2f.
                assert!(rel(snap.assets, snap.expected_debt + f) < 1e-12);
                assert!(rel(snap.equity, 2.0 * f) < 1e-12);
            } else {
                // Post-collapse only the refinancing option survives.
                assert_eq!(snap.market_debt, 0.0);
                assert!(rel(snap.assets, f) < 1e-12 && rel(snap.equity, f) < 1e-12);
            }
            // Effective par: full, then eroded to D, then wiped out.
            if s <= points.s_star {
                assert!(rel(snap.effective_par, params.par) < 1e-12);
            } else if s < points.s_tilde {
                assert!(rel(snap.effective_par, snap.market_debt) < 1e-12);
            } else {
                assert_eq!(snap.effective_par, 0.0);
            }
        }
    }
}

#[test]
fn pricing_odes_vanish_and_debt_is_a_discounted_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..20 {
        let (params, points) = draw_cycle(&mut rng);
        for _ in 0..50 {
            let s = rng.random_range(0.01..points.s_tilde);
            let rb = ode_residual_expected_debt(&params, s);
            let rf = ode_residual_new_debt(&params, points.k, points.beta, s);
            let scale = expected_debt(&params, s).max(1.0);
            assert!(rb.abs() <= 1e-9 * scale, "B ODE residual {rb} at s={s}");
            assert!(rf.abs() <= 1e-9 * scale, "f ODE residual {rf} at s={s}");
        }

        // B(s0) = integral of the expected redemption flow discounted at mu:
        // int_0^inf s0 e^{a t} e^{-mu t} dt = s0 / delta.
        let horizon = 40.0 / params.delta;
        let discounted = integrate(
            &|t| expected_money(&params, t) * (-params.mu() * t).exp(),
            0.0,
            horizon,
            1e-10,
        );
        assert!(
            rel(discounted, expected_debt(&params, params.s0)) < 1e-6,
            "discounted expectation {discounted} vs B(s0)={}",
            expected_debt(&params, params.s0)
        );
    }
}

#[test]
fn market_debt_peaks_at_the_critical_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    for _ in 0..100 {
        let (params, points) = draw_cycle(&mut rng);
        let n = 10_000;
        let step = points.s_tilde / (n + 1) as f64;
        let mut best = (0.0_f64, f64::NEG_INFINITY);
        for i in 1..=n {
            let s = step * i as f64;
            let d = expected_debt(&params, s) - new_debt_option(points.k, points.beta, s);
            if d > best.1 {
                best = (s, d);
            }
        }
        assert!(
            (best.0 - points.s_star).abs() <= step,
            "grid argmax {} vs critical point {}",
            best.0,
            points.s_star
        );
        assert!(best.1 <= params.par * (1.0 + 1e-9));
    }
}

#[test]
fn debt_curves_are_monotone_in_the_expected_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..20 {
        let (params, points) = draw_cycle(&mut rng);
        let n = 500;
        let mut prev: Option<(f64, f64, f64, f64)> = None;
        for i in 1..=n {
            let s = points.s_tilde * i as f64 / (n + 1) as f64;
            let b = expected_debt(&params, s);
            let f = new_debt_option(points.k, points.beta, s);
            let d = b - f;
            if let Some((s_prev, b_prev, f_prev, d_prev)) = prev {
                assert!(b > b_prev && f > f_prev);
                if s <= points.s_star && s_prev <= points.s_star {
                    assert!(d >= d_prev - 1e-12 * params.par, "D not rising at s={s}");
                }
                if s_prev >= points.s_star {
                    assert!(d <= d_prev + 1e-12 * params.par, "D not falling at s={s}");
                }
            }
            prev = Some((s, b, f, d));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn milestones_are_strictly_ordered(
        r in 0.01f64..0.12,
        delta in 0.01f64..0.10,
        a in 0.001f64..0.05,
        sigma in 0.10f64..0.50,
        par in 50.0f64..500.0,
    ) {
        let params = ModelParams::new(r, delta, a, sigma, par, 0.5 * delta * par).unwrap();
        let points = cycle_points(&params).unwrap();
        prop_assert!(0.0 < points.s_hat);
        prop_assert!(points.s_hat < points.s_star);
        prop_assert!(points.s_star < points.s_tilde);
        prop_assert!(points.s_tilde.is_finite());
        prop_assert!(points.beta > 1.0 && points.k > 0.0);
        for minsky in [points.s_m_market, points.s_m_expected].into_iter().flatten() {
            prop_assert!(0.0 < minsky && minsky <= points.s_hat * (1.0 + 1e-9));
        }
    }

    #[test]
    fn milestones_scale_linearly_with_par(
        r in 0.01f64..0.12,
        delta in 0.01f64..0.10,
        a in 0.001f64..0.05,
        sigma in 0.10f64..0.50,
        scale in 0.2f64..8.0,
    ) {
        let base = ModelParams::new(r, delta, a, sigma, 100.0, 0.5 * delta * 100.0).unwrap();
        let scaled = ModelParams::new(r, delta, a, sigma, 100.0 * scale, 0.5 * delta * 100.0 * scale).unwrap();
        let p1 = cycle_points(&base).unwrap();
        let p2 = cycle_points(&scaled).unwrap();
        let roots = CharacteristicRoots::solve(base.r, base.delta, base.sigma).unwrap();

        // Levels are homogeneous of degree one in par.
        prop_assert!(rel(p2.s_hat, scale * p1.s_hat) < 1e-9);
        prop_assert!(rel(p2.s_star, scale * p1.s_star) < 1e-9);
        prop_assert!(rel(p2.s_tilde, scale * p1.s_tilde) < 1e-9);
        prop_assert!(rel(equilibrium_point(&scaled), scale * equilibrium_point(&base)) < 1e-12);
        let f1 = new_debt_option(p1.k, p1.beta, p1.s_star);
        let f2 = new_debt_option(p2.k, p2.beta, p2.s_star);
        prop_assert!(rel(f2, scale * f1) < 1e-9);
        prop_assert!(rel(
            excess_money(&scaled, &roots).unwrap(),
            scale * excess_money(&base, &roots).unwrap(),
        ) < 1e-9);

        // Shape quantities are scale free.
        prop_assert_eq!(p1.beta, p2.beta);
        prop_assert!(rel(divergence_scale(&roots).unwrap(), p1.s_star / p1.s_hat) < 1e-9);
        let r1 = default_probabilities(&base, &p1);
        let r2 = default_probabilities(&scaled, &p2);
        prop_assert!((r1.p_hat - r2.p_hat).abs() < 1e-9);
        prop_assert!((r1.p_star - r2.p_star).abs() < 1e-9);
        prop_assert!((r1.p_geometric - r2.p_geometric).abs() < 1e-9);
        prop_assert!((r1.omega - r2.omega).abs() < 1e-9 * r1.omega);
    }

    #[test]
    fn default_probabilities_stay_in_the_unit_interval(
        r in 0.01f64..0.12,
        delta in 0.01f64..0.10,
        a in 0.001f64..0.05,
        sigma in 0.10f64..0.50,
        par in 50.0f64..500.0,
    ) {
        let params = ModelParams::new(r, delta, a, sigma, par, 0.5 * delta * par).unwrap();
        let points = cycle_points(&params).unwrap();
        let risk = default_probabilities(&params, &points);
        for p in [risk.p_hat, risk.p_star, risk.p_geometric, risk.dd_survival, risk.dd_default] {
            prop_assert!((0.0..=1.0).contains(&p), "probability {p} out of range");
        }
        prop_assert_eq!(risk.p_tilde, 1.0);
        prop_assert!(risk.omega > 1.0, "growth index {} not expansionary", risk.omega);
        prop_assert!((risk.dd_survival + risk.dd_default - 1.0).abs() < 1e-12);
        prop_assert!((risk.p_star - 1.0 / points.beta).abs() < 1e-12);
    }
}
