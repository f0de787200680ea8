//! Distributional checks of the Monte Carlo engine against closed forms.
//!
//! The exact scheme makes `ln s_T` a sum of independent normals, so the
//! terminal law is known in full: every moment test below compares a sample
//! statistic against its analytic value within three standard errors of the
//! statistic itself. Hitting probabilities are checked against the
//! reflection formula for drifted Brownian motion.

use credit_cycle::sim::{
    cycle_passage_stats, passage_stats, terminal_moments, Scheme, SimConfig,
};
use credit_cycle::{cycle::cycle_points, ModelParams};
use statrs::distribution::{ContinuousCDF, Normal};

#[test]
fn terminal_distribution_matches_the_lognormal_law() {
    let params = ModelParams::reference();
    let config = SimConfig {
        horizon: 10.0,
        dt: 1e-2,
        n_paths: 100_000,
        seed: 7,
        scheme: Scheme::Exact,
    };
    let m = terminal_moments(&params, &config).unwrap();
    let n = m.n_paths as f64;

    // E[s_T] = s0 e^{aT}.
    let mean_true = params.s0 * (params.a * config.horizon).exp();
    assert!(
        (m.mean - mean_true).abs() <= 3.0 * m.se_mean,
        "terminal mean {} vs {} (se {})",
        m.mean,
        mean_true,
        m.se_mean
    );

    // ln s_T ~ N(ln s0 + nu T, sigma^2 T) exactly under the exact scheme.
    let log_mean_true = params.s0.ln() + params.log_drift() * config.horizon;
    let log_var_true = params.sigma * params.sigma * config.horizon;
    let se_log_mean = (log_var_true / n).sqrt();
    assert!(
        (m.log_mean - log_mean_true).abs() <= 3.0 * se_log_mean,
        "log mean {} vs {} (se {})",
        m.log_mean,
        log_mean_true,
        se_log_mean
    );
    let se_log_var = log_var_true * (2.0 / (n - 1.0)).sqrt();
    assert!(
        (m.log_var - log_var_true).abs() <= 3.0 * se_log_var,
        "log var {} vs {} (se {})",
        m.log_var,
        log_var_true,
        se_log_var
    );
    assert!(m.log_skew.abs() <= 3.0 * (6.0 / n).sqrt());
    assert!(m.log_excess_kurtosis.abs() <= 3.0 * (24.0 / n).sqrt());
}

#[test]
fn euler_and_exact_schemes_agree_in_mean() {
    let params = ModelParams::reference();
    let base = SimConfig {
        horizon: 2.0,
        dt: 1e-3,
        n_paths: 20_000,
        seed: 11,
        scheme: Scheme::Exact,
    };
    let exact = terminal_moments(&params, &base).unwrap();
    let euler = terminal_moments(
        &params,
        &SimConfig {
            scheme: Scheme::Euler,
            ..base
        },
    )
    .unwrap();
    let mean_true = params.s0 * (params.a * base.horizon).exp();
    assert!((exact.mean - mean_true).abs() <= 3.0 * exact.se_mean);
    assert!((euler.mean - mean_true).abs() <= 3.0 * euler.se_mean);
}

#[test]
fn driftless_hit_probability_matches_the_reflection_formula() {
    // With a = 0 the log drift is -sigma^2/2 < 0, so the collapse level is
    // hit with probability strictly below one even over an infinite horizon.
    let params = ModelParams::new(0.05, 0.045, 0.0, 0.15, 200.0, 9.6).unwrap();
    let points = cycle_points(&params).unwrap();
    let level = points.s_tilde;
    let config = SimConfig {
        horizon: 150.0,
        dt: 5e-3,
        n_paths: 20_000,
        seed: 99,
        scheme: Scheme::Exact,
    };
    let stats = passage_stats(&params, &[level], &config).unwrap();
    let hit = stats.levels[0].hit_fraction;

    // Reflection formula for P(max_{t<=T} ln(s_t/s0) >= b), b = ln(L/s0):
    // Phi((nu T - b)/(sigma sqrt T)) + e^{2 nu b / sigma^2} Phi((-nu T - b)/(sigma sqrt T)).
    let nu = params.log_drift();
    let b = (level / params.s0).ln();
    let sig_t = params.sigma * config.horizon.sqrt();
    let gauss = Normal::new(0.0, 1.0).unwrap();
    let p_hit = gauss.cdf((nu * config.horizon - b) / sig_t)
        + (2.0 * nu * b / (params.sigma * params.sigma)).exp()
            * gauss.cdf((-nu * config.horizon - b) / sig_t);
    let p_ever = (2.0 * nu * b / (params.sigma * params.sigma)).exp();

    let se = (p_hit * (1.0 - p_hit) / config.n_paths as f64).sqrt();
    // Discrete monitoring misses excursions between grid points, so allow a
    // small one-sided bias on top of the Monte Carlo error.
    let bias_budget = 0.01;
    assert!(
        hit <= p_hit + 3.0 * se && hit >= p_hit - 3.0 * se - bias_budget,
        "hit fraction {hit} vs continuous-monitoring {p_hit} (se {se})"
    );
    assert!(hit < p_ever, "finite-horizon fraction must stay below {p_ever}");
    assert_eq!(stats.ordering_violations, 0);
}

#[test]
fn results_are_bitwise_stable_across_thread_counts() {
    let params = ModelParams::reference();
    let points = cycle_points(&params).unwrap();
    let config = SimConfig {
        horizon: 5.0,
        dt: 1e-2,
        n_paths: 2_000,
        seed: 3,
        scheme: Scheme::Exact,
    };

    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let m = terminal_moments(&params, &config).unwrap();
            let p = cycle_passage_stats(&params, &points, &config).unwrap();
            (
                serde_json::to_string(&m).unwrap(),
                serde_json::to_string(&p).unwrap(),
            )
        })
    };

    let (m1, p1) = run(1);
    let (m4, p4) = run(4);
    assert_eq!(m1, m4, "terminal moments depend on the thread count");
    assert_eq!(p1, p4, "passage statistics depend on the thread count");
}
