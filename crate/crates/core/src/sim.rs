//! Monte Carlo simulation of the money-issuance process.
//!
//! Issuance follows the geometric Brownian motion `ds/s = a dt + sigma dz`,
//! so `ln s` drifts at `nu = a - sigma^2/2` and the exact update over a step
//! `dt` is
//!
//! ```text
//! s_{t+dt} = s_t exp(nu dt + sigma sqrt(dt) Z),   Z ~ N(0,1).
//! ```
//!
//! The exact scheme samples that update directly (the terminal marginal is
//! exact for any `dt`); the Euler scheme applies the raw increment
//! `s (1 + a dt + sigma sqrt(dt) Z)` and rejects any step that would drive
//! the level non-positive. First-passage times through the cycle milestones
//! are measured per path with log-space interpolation between steps;
//! discrete monitoring undercounts intra-step excursions and that bias is
//! accepted rather than corrected (tolerances downstream absorb it at the
//! default `dt = 1e-3`).
//!
//! Determinism: every path derives its own ChaCha8 stream from
//! `(seed, path index)`, and aggregation reduces in fixed path order, so
//! results are byte-identical for a given `(seed, n_paths, dt)` regardless
//! of thread count. The pricing layer requires `sigma > 0`, but the
//! simulator accepts `sigma = 0` structs for the deterministic limit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::CyclePoints;
use crate::error::{Error, Result};
use crate::params::{CharacteristicRoots, ModelParams};
use crate::valuation::{expected_debt, new_debt_option};

/// Discretization scheme for the issuance SDE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Log-space update; the step marginal is the exact GBM transition.
    Exact,
    /// Raw-increment update; positivity is not guaranteed.
    Euler,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Scheme::Exact),
            "euler" => Ok(Scheme::Euler),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected 'exact' or 'euler')"
            ))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Exact => "exact",
            Scheme::Euler => "euler",
        })
    }
}

/// Simulation plan: horizon and step in years, path count, master seed,
/// scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub horizon: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            horizon: 200.0,
            dt: 1e-3,
            n_paths: 100_000,
            seed: 42,
            scheme: Scheme::Exact,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "dt",
                reason: format!("must be a positive finite step, got {}", self.dt),
            });
        }
        if !(self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "horizon",
                reason: format!("must be finite and at least dt, got {}", self.horizon),
            });
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParameter {
                field: "n_paths",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Number of steps covering the horizon (nearest integer, at least 1).
    pub fn n_steps(&self) -> usize {
        ((self.horizon / self.dt).round() as usize).max(1)
    }
}

/// Per-path generator: an independent ChaCha8 stream tied to
/// `(master seed, path index)`, so paths are reproducible independently of
/// scheduling.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// One simulated trajectory. `times[0] = 0` and `values[0] = s0`;
/// `stopped_early` marks truncation at a stop level rather than the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub stopped_early: bool,
}

/// Simulate the stream-0 path of the plan.
pub fn simulate_money_path(params: &ModelParams, config: &SimConfig) -> Result<SimPath> {
    simulate_money_path_stream(params, config, 0)
}

/// Simulate the path with a given stream index.
pub fn simulate_money_path_stream(
    params: &ModelParams,
    config: &SimConfig,
    stream: u64,
) -> Result<SimPath> {
    simulate_money_path_with_stop(params, config, stream, None)
}

/// Simulate one path, optionally stopping at the first step whose level
/// reaches `stop_level`. The stopped path is a bitwise prefix of the
/// unstopped one (plus the stopping step itself).
pub fn simulate_money_path_with_stop(
    params: &ModelParams,
    config: &SimConfig,
    stream: u64,
    stop_level: Option<f64>,
) -> Result<SimPath> {
    config.validate()?;
    let n_steps = config.n_steps();
    let dt = config.dt;
    let nu = params.log_drift();
    let sig_sqdt = params.sigma * dt.sqrt();
    let mut rng = path_rng(config.seed, stream);

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    values.push(params.s0);
    let mut stopped_early = false;
    if let Some(level) = stop_level {
        if params.s0 >= level {
            return Ok(SimPath {
                times,
                values,
                stopped_early: true,
            });
        }
    }

    let mut x = 0.0_f64; // ln(s/s0) for the exact scheme
    let mut s = params.s0;
    for step in 0..n_steps {
        let z: f64 = rng.sample(StandardNormal);
        match config.scheme {
            Scheme::Exact => {
                x += nu * dt + sig_sqdt * z;
                s = params.s0 * x.exp();
            }
            Scheme::Euler => {
                s *= 1.0 + params.a * dt + sig_sqdt * z;
                if s <= 0.0 {
                    return Err(Error::EulerStepRejected { step });
                }
            }
        }
        times.push((step + 1) as f64 * dt);
        values.push(s);
        if let Some(level) = stop_level {
            if s >= level {
                stopped_early = true;
                break;
            }
        }
    }
    Ok(SimPath {
        times,
        values,
        stopped_early,
    })
}

/// Closed-form mean issuance `<s_t> = s0 e^{a t}`.
pub fn expected_money(params: &ModelParams, t: f64) -> f64 {
    params.s0 * (params.a * t).exp()
}

/// Ito-consistency residual `(mu B(s) - s) - a B(s)` with `B = s/delta`:
/// the expected-return decomposition of the perpetuity (price drift plus
/// coupon `s`) must reproduce the issuance drift. Analytically zero.
pub fn sde_drift_residual(params: &ModelParams, s: f64) -> f64 {
    let b = expected_debt(params, s);
    (params.mu() * b - s) - params.a * b
}

/// First time the path reaches `level`, interpolated in log-space between
/// steps; `None` if the path never reaches it. A level at or below the
/// starting value returns `Some(0.0)`.
pub fn first_passage(path: &SimPath, level: f64) -> Option<f64> {
    let s0 = *path.values.first()?;
    if level <= s0 {
        return Some(0.0);
    }
    let log_target = (level / s0).ln();
    let mut x_prev = 0.0_f64;
    for i in 1..path.values.len() {
        let x = (path.values[i] / s0).ln();
        if x >= log_target {
            let t_prev = path.times[i - 1];
            let frac = (log_target - x_prev) / (x - x_prev);
            return Some(t_prev + frac * (path.times[i] - t_prev));
        }
        x_prev = x;
    }
    None
}

/// Moments of the terminal level `s_T` and of `ln s_T` over the full plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminalMoments {
    pub n_paths: usize,
    pub horizon: f64,
    /// Sample mean of `s_T`.
    pub mean: f64,
    /// Sample standard deviation of `s_T`.
    pub sd: f64,
    /// Standard error of the sample mean.
    pub se_mean: f64,
    /// Sample mean of `ln s_T`.
    pub log_mean: f64,
    /// Sample variance of `ln s_T`.
    pub log_var: f64,
    /// Sample skewness of `ln s_T` (zero for the exact scheme up to noise).
    pub log_skew: f64,
    /// Sample excess kurtosis of `ln s_T`.
    pub log_excess_kurtosis: f64,
}

/// Simulate all paths to the horizon and reduce the terminal levels.
pub fn terminal_moments(params: &ModelParams, config: &SimConfig) -> Result<TerminalMoments> {
    config.validate()?;
    let n_steps = config.n_steps();
    let dt = config.dt;
    let nu = params.log_drift();
    let sig_sqdt = params.sigma * dt.sqrt();
    let scheme = config.scheme;
    let a = params.a;
    let s0 = params.s0;
    let seed = config.seed;

    // ln(s_T/s0) per path, in path order.
    let logs: Vec<f64> = (0..config.n_paths)
        .into_par_iter()
        .map(|path| -> Result<f64> {
            let mut rng = path_rng(seed, path as u64);
            match scheme {
                Scheme::Exact => {
                    let mut x = 0.0_f64;
                    for _ in 0..n_steps {
                        let z: f64 = rng.sample(StandardNormal);
                        x += nu * dt + sig_sqdt * z;
                    }
                    Ok(x)
                }
                Scheme::Euler => {
                    let mut s = s0;
                    for step in 0..n_steps {
                        let z: f64 = rng.sample(StandardNormal);
                        s *= 1.0 + a * dt + sig_sqdt * z;
                        if s <= 0.0 {
                            return Err(Error::EulerStepRejected { step });
                        }
                    }
                    Ok((s / s0).ln())
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let n = logs.len() as f64;
    let mut sum_s = 0.0;
    let mut sum_x = 0.0;
    for &x in &logs {
        sum_s += s0 * x.exp();
        sum_x += x + s0.ln();
    }
    let mean = sum_s / n;
    let log_mean = sum_x / n;
    let (mut m2s, mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0, 0.0);
    for &x in &logs {
        let ds = s0 * x.exp() - mean;
        m2s += ds * ds;
        let d = x + s0.ln() - log_mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let var_s = m2s / (n - 1.0).max(1.0);
    let log_var = m2 / (n - 1.0).max(1.0);
    let (c2, c3, c4) = (m2 / n, m3 / n, m4 / n);
    Ok(TerminalMoments {
        n_paths: logs.len(),
        horizon: config.horizon,
        mean,
        sd: var_s.sqrt(),
        se_mean: (var_s / n).sqrt(),
        log_mean,
        log_var,
        log_skew: c3 / c2.powf(1.5),
        log_excess_kurtosis: c4 / (c2 * c2) - 3.0,
    })
}

/// Hitting-time summary for one level, over the paths that reached it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: f64,
    pub hits: usize,
    pub hit_fraction: f64,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub q10: Option<f64>,
    pub q90: Option<f64>,
}

/// First-passage statistics for a sorted ladder of levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageStats {
    pub n_paths: usize,
    pub horizon: f64,
    pub dt: f64,
    pub levels: Vec<LevelStats>,
    /// Paths whose recorded hits contradict the level order (a higher level
    /// hit earlier, or hit while a lower one was missed). Zero for
    /// continuous-path simulation by construction; measured, not assumed.
    pub ordering_violations: usize,
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Monte Carlo first-passage statistics through `levels`. Levels are
/// deduplicated, sorted ascending, and must be positive and finite.
///
/// For `nu = a - sigma^2/2 > 0` the mean hitting time of level `L` converges
/// to `ln(L/s0)/nu`; for `nu <= 0` the hit fraction stays below
/// `(s0/L)^{1 - 2a/sigma^2}` no matter the horizon.
pub fn passage_stats(
    params: &ModelParams,
    levels: &[f64],
    config: &SimConfig,
) -> Result<PassageStats> {
    config.validate()?;
    if levels.is_empty() {
        return Err(Error::Domain("no passage levels given".into()));
    }
    let mut sorted_levels = levels.to_vec();
    sorted_levels.sort_by(|a, b| a.partial_cmp(b).expect("levels must not be NaN"));
    sorted_levels.dedup();
    if sorted_levels[0] <= 0.0 || !sorted_levels.iter().all(|l| l.is_finite()) {
        return Err(Error::Domain(format!(
            "passage levels must be positive and finite, got {sorted_levels:?}"
        )));
    }

    let n_levels = sorted_levels.len();
    let n_steps = config.n_steps();
    let dt = config.dt;
    let nu = params.log_drift();
    let sig_sqdt = params.sigma * dt.sqrt();
    let scheme = config.scheme;
    let a = params.a;
    let s0 = params.s0;
    let seed = config.seed;
    let log_targets: Vec<f64> = sorted_levels.iter().map(|l| (l / s0).ln()).collect();

    let per_path: Vec<Vec<Option<f64>>> = (0..config.n_paths)
        .into_par_iter()
        .map(|path| -> Result<Vec<Option<f64>>> {
            let mut hits: Vec<Option<f64>> = vec![None; n_levels];
            let mut idx = 0;
            while idx < n_levels && log_targets[idx] <= 0.0 {
                hits[idx] = Some(0.0);
                idx += 1;
            }
            if idx == n_levels {
                return Ok(hits);
            }
            let mut rng = path_rng(seed, path as u64);
            match scheme {
                Scheme::Exact => {
                    let mut x = 0.0_f64;
                    for step in 0..n_steps {
                        let z: f64 = rng.sample(StandardNormal);
                        let x_new = x + nu * dt + sig_sqdt * z;
                        while idx < n_levels && x_new >= log_targets[idx] {
                            let frac = (log_targets[idx] - x) / (x_new - x);
                            hits[idx] = Some((step as f64 + frac) * dt);
                            idx += 1;
                        }
                        if idx == n_levels {
                            break;
                        }
                        x = x_new;
                    }
                }
                Scheme::Euler => {
                    let mut s = s0;
                    for step in 0..n_steps {
                        let z: f64 = rng.sample(StandardNormal);
                        let s_new = s * (1.0 + a * dt + sig_sqdt * z);
                        if s_new <= 0.0 {
                            return Err(Error::EulerStepRejected { step });
                        }
                        while idx < n_levels && s_new >= sorted_levels[idx] {
                            let x = (s / s0).ln();
                            let x_new = (s_new / s0).ln();
                            let frac = (log_targets[idx] - x) / (x_new - x);
                            hits[idx] = Some((step as f64 + frac) * dt);
                            idx += 1;
                        }
                        if idx == n_levels {
                            break;
                        }
                        s = s_new;
                    }
                }
            }
            Ok(hits)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut ordering_violations = 0;
    for hits in &per_path {
        let mut prev: Option<f64> = Some(f64::NEG_INFINITY);
        for h in hits {
            match (prev, h) {
                (Some(p), Some(t)) if *t < p => ordering_violations += 1,
                (None, Some(_)) => ordering_violations += 1,
                _ => {}
            }
            if let Some(t) = h {
                prev = Some(*t);
            } else {
                prev = None;
            }
        }
    }

    let n_paths = per_path.len();
    let levels_out = sorted_levels
        .iter()
        .enumerate()
        .map(|(j, &level)| {
            let mut times: Vec<f64> = per_path.iter().filter_map(|h| h[j]).collect();
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let hits = times.len();
            let mean = if hits > 0 {
                Some(times.iter().sum::<f64>() / hits as f64)
            } else {
                None
            };
            LevelStats {
                level,
                hits,
                hit_fraction: hits as f64 / n_paths as f64,
                mean,
                median: quantile_sorted(&times, 0.5),
                q10: quantile_sorted(&times, 0.1),
                q90: quantile_sorted(&times, 0.9),
            }
        })
        .collect();

    Ok(PassageStats {
        n_paths,
        horizon: config.horizon,
        dt: config.dt,
        levels: levels_out,
        ordering_violations,
    })
}

/// Passage statistics through the cycle milestones strictly above `s0`
/// (finite ones only — a never-collapsing economy has an infinite collapse
/// point).
pub fn cycle_passage_stats(
    params: &ModelParams,
    points: &CyclePoints,
    config: &SimConfig,
) -> Result<PassageStats> {
    let levels: Vec<f64> = [points.s_hat, points.s_star, points.s_tilde]
        .into_iter()
        .filter(|l| l.is_finite() && *l > params.s0)
        .collect();
    if levels.is_empty() {
        return Err(Error::Domain(
            "all cycle milestones lie at or below s0; nothing to measure".into(),
        ));
    }
    passage_stats(params, &levels, config)
}

// ---------------------------------------------------------------------------
// Hedging experiment
// ---------------------------------------------------------------------------

/// Measured one-step increment variances at one step size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HedgeRung {
    pub dt: f64,
    /// Variance of the hedged increment `df - f'(s) ds`.
    pub var_hedged: f64,
    /// Variance of the raw option increment `df`.
    pub var_unhedged: f64,
}

/// Outcome of the delta-hedging order-of-noise experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HedgeResult {
    pub rungs: Vec<HedgeRung>,
    /// Log-log OLS slope of hedged variance vs dt (about 2: the hedge
    /// removes the O(sqrt(dt)) noise, leaving O(dt) terms).
    pub slope_hedged: f64,
    /// Log-log OLS slope of unhedged variance vs dt (about 1).
    pub slope_unhedged: f64,
    /// Unhedged over hedged variance at the finest step.
    pub variance_ratio: f64,
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Measure how the one-step increment variance of the portfolio
/// `Phi = f(s) - f'(s) s` (short one option-delta of issuance per option)
/// scales with the step size, against the unhedged option increment.
///
/// Each `(rung, sample)` pair draws from its own RNG stream. With
/// `sigma = 0` both variances are exactly zero and the slopes are NaN.
pub fn hedged_portfolio_experiment(
    params: &ModelParams,
    k: f64,
    roots: &CharacteristicRoots,
    s_start: f64,
    dts: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<HedgeResult> {
    if dts.len() < 2 {
        return Err(Error::Domain("need at least two step sizes".into()));
    }
    if !(s_start > 0.0) {
        return Err(Error::Domain(format!(
            "start level must be positive, got {s_start}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::Domain("need at least two samples per rung".into()));
    }
    let beta = roots.beta_plus;
    let nu = params.log_drift();
    let fprime = k * beta * s_start.powf(beta - 1.0);
    let f_start = new_debt_option(k, beta, s_start);

    let mut rungs = Vec::with_capacity(dts.len());
    for (r, &dt) in dts.iter().enumerate() {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("step sizes must be positive, got {dt}")));
        }
        let sig_sqdt = params.sigma * dt.sqrt();
        let (mut sum_h, mut sum_u) = (0.0, 0.0);
        let mut increments = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let mut rng = path_rng(seed, (r * n_samples + i) as u64);
            let z: f64 = rng.sample(StandardNormal);
            let s_new = s_start * (nu * dt + sig_sqdt * z).exp();
            let d_f = new_debt_option(k, beta, s_new) - f_start;
            let d_phi = d_f - fprime * (s_new - s_start);
            increments.push((d_phi, d_f));
            sum_h += d_phi;
            sum_u += d_f;
        }
        let n = n_samples as f64;
        let (mean_h, mean_u) = (sum_h / n, sum_u / n);
        let (mut var_h, mut var_u) = (0.0, 0.0);
        for (d_phi, d_f) in &increments {
            var_h += (d_phi - mean_h) * (d_phi - mean_h);
            var_u += (d_f - mean_u) * (d_f - mean_u);
        }
        rungs.push(HedgeRung {
            dt,
            var_hedged: var_h / (n - 1.0),
            var_unhedged: var_u / (n - 1.0),
        });
    }

    let log_dts: Vec<f64> = rungs.iter().map(|r| r.dt.ln()).collect();
    let log_h: Vec<f64> = rungs.iter().map(|r| r.var_hedged.ln()).collect();
    let log_u: Vec<f64> = rungs.iter().map(|r| r.var_unhedged.ln()).collect();
    let finest = rungs
        .iter()
        .min_by(|a, b| a.dt.partial_cmp(&b.dt).unwrap())
        .expect("at least two rungs");
    Ok(HedgeResult {
        slope_hedged: ols_slope(&log_dts, &log_h),
        slope_unhedged: ols_slope(&log_dts, &log_u),
        variance_ratio: finest.var_unhedged / finest.var_hedged,
        rungs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sigma_zero_params() -> ModelParams {
        let mut p = ModelParams::reference();
        p.sigma = 0.0;
        p
    }

    #[test]
    fn config_validation() {
        let mut cfg = SimConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.n_steps(), 200_000);
        cfg.dt = 0.0;
        assert!(cfg.validate().is_err());
        cfg.dt = 1.0;
        cfg.horizon = 0.5;
        assert!(cfg.validate().is_err());
        cfg.horizon = 10.0;
        cfg.n_paths = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_volatility_path_is_the_deterministic_exponential() {
        let p = sigma_zero_params();
        let cfg = SimConfig {
            horizon: 10.0,
            dt: 0.1,
            n_paths: 1,
            seed: 7,
            scheme: Scheme::Exact,
        };
        let path = simulate_money_path(&p, &cfg).unwrap();
        assert_eq!(path.values.len(), 101);
        assert!(!path.stopped_early);
        for (t, s) in path.times.iter().zip(&path.values) {
            assert_relative_eq!(*s, expected_money(&p, *t), max_relative = 1e-12);
        }
    }

    #[test]
    fn identical_seeds_reproduce_paths_bitwise() {
        let p = ModelParams::reference();
        let cfg = SimConfig {
            horizon: 2.0,
            dt: 0.01,
            n_paths: 1,
            seed: 99,
            scheme: Scheme::Exact,
        };
        let a = simulate_money_path_stream(&p, &cfg, 3).unwrap();
        let b = simulate_money_path_stream(&p, &cfg, 3).unwrap();
        assert_eq!(a, b);
        let c = simulate_money_path_stream(&p, &cfg, 4).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn stopped_path_is_a_prefix_of_the_full_path() {
        let p = ModelParams::reference();
        let cfg = SimConfig {
            horizon: 100.0,
            dt: 0.01,
            n_paths: 1,
            seed: 5,
            scheme: Scheme::Exact,
        };
        let full = simulate_money_path_stream(&p, &cfg, 11).unwrap();
        let stopped =
            simulate_money_path_with_stop(&p, &cfg, 11, Some(12.0)).unwrap();
        assert!(stopped.stopped_early);
        assert!(stopped.values.len() < full.values.len());
        assert_eq!(
            &full.values[..stopped.values.len()],
            stopped.values.as_slice()
        );
        assert!(*stopped.values.last().unwrap() >= 12.0);

        // Stop level at or below s0 stops immediately.
        let trivial = simulate_money_path_with_stop(&p, &cfg, 11, Some(9.0)).unwrap();
        assert_eq!(trivial.values, vec![p.s0]);
    }

    #[test]
    fn first_passage_cases() {
        let p = ModelParams::reference();
        // Level at or below the start: zero.
        let flat = SimPath {
            times: vec![0.0, 1.0],
            values: vec![9.6, 9.7],
            stopped_early: false,
        };
        assert_eq!(first_passage(&flat, 9.6), Some(0.0));
        assert_eq!(first_passage(&flat, 5.0), Some(0.0));
        // Never reached.
        assert_eq!(first_passage(&flat, 50.0), None);
        // Log-space interpolation: s goes 1 -> e over one unit of time, so
        // level e^0.5 is hit at t = 0.5 exactly.
        let seg = SimPath {
            times: vec![0.0, 1.0],
            values: vec![1.0, std::f64::consts::E],
            stopped_early: false,
        };
        let t = first_passage(&seg, (0.5f64).exp()).unwrap();
        assert_relative_eq!(t, 0.5, max_relative = 1e-12);

        // Zero volatility: crossing time is ln(level/s0)/a.
        let pz = sigma_zero_params();
        let cfg = SimConfig {
            horizon: 40.0,
            dt: 0.01,
            n_paths: 1,
            seed: 1,
            scheme: Scheme::Exact,
        };
        let path = simulate_money_path(&pz, &cfg).unwrap();
        let level = 15.409414802251161;
        let t = first_passage(&path, level).unwrap();
        assert_relative_eq!(t, (level / p.s0).ln() / p.a, max_relative = 1e-9);
    }

    #[test]
    fn expected_money_examples() {
        let p = ModelParams::reference();
        assert_eq!(expected_money(&p, 0.0), 9.6);
        assert_relative_eq!(expected_money(&p, 10.0), 12.326644, max_relative = 1e-6);
    }

    #[test]
    fn drift_residual_is_identically_zero() {
        let p = ModelParams::reference();
        for s in [0.01, 1.0, 9.0, 15.409414802251161, 100.0, 1e6] {
            let r = sde_drift_residual(&p, s);
            assert!(r.abs() <= 1e-12 * s.max(1.0), "residual {r} at s={s}");
        }
    }

    #[test]
    fn euler_rejects_non_positive_steps() {
        let p = ModelParams::new(0.05, 0.045, 0.025, 5.0, 200.0, 9.6).unwrap();
        let cfg = SimConfig {
            horizon: 100.0,
            dt: 1.0,
            n_paths: 1,
            seed: 2,
            scheme: Scheme::Euler,
        };
        let err = simulate_money_path(&p, &cfg).unwrap_err();
        assert!(matches!(err, Error::EulerStepRejected { .. }));
    }

    #[test]
    fn passage_stats_input_validation() {
        let p = ModelParams::reference();
        let cfg = SimConfig {
            horizon: 1.0,
            dt: 0.1,
            n_paths: 2,
            seed: 0,
            scheme: Scheme::Exact,
        };
        assert!(passage_stats(&p, &[], &cfg).is_err());
        assert!(passage_stats(&p, &[-1.0, 10.0], &cfg).is_err());
        assert!(passage_stats(&p, &[10.0, f64::INFINITY], &cfg).is_err());
    }

    #[test]
    fn zero_volatility_passage_times_are_exact() {
        let p = sigma_zero_params();
        let cfg = SimConfig {
            horizon: 60.0,
            dt: 0.01,
            n_paths: 3,
            seed: 0,
            scheme: Scheme::Exact,
        };
        let stats = passage_stats(&p, &[12.0, 15.0, 9.0], &cfg).unwrap();
        // Levels are sorted and deduplicated; 9.0 <= s0 hits at zero.
        assert_eq!(stats.levels[0].level, 9.0);
        assert_eq!(stats.levels[0].mean, Some(0.0));
        for ls in &stats.levels[1..] {
            let expected = (ls.level / p.s0).ln() / p.a;
            assert_eq!(ls.hits, 3);
            assert_relative_eq!(ls.mean.unwrap(), expected, max_relative = 1e-9);
            assert_relative_eq!(ls.median.unwrap(), expected, max_relative = 1e-9);
        }
        assert_eq!(stats.ordering_violations, 0);
    }

    #[test]
    fn quantiles_interpolate_linearly() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&xs, 0.5), Some(2.5));
        assert_eq!(quantile_sorted(&xs, 0.0), Some(1.0));
        assert_eq!(quantile_sorted(&xs, 1.0), Some(4.0));
        assert_eq!(quantile_sorted(&[], 0.5), None);
    }

    #[test]
    fn zero_volatility_hedge_variances_vanish() {
        let p = sigma_zero_params();
        let roots = CharacteristicRoots {
            beta_minus: -1.848628801000516,
            beta_plus: 2.404184356556070,
        };
        let res = hedged_portfolio_experiment(
            &p,
            0.198586167337407,
            &roots,
            12.0,
            &[1e-2, 5e-3, 2.5e-3],
            64,
            9,
        )
        .unwrap();
        for rung in &res.rungs {
            assert_eq!(rung.var_hedged, 0.0);
            assert_eq!(rung.var_unhedged, 0.0);
        }
        assert!(res.slope_hedged.is_nan() && res.slope_unhedged.is_nan());
    }

    #[test]
    fn hedged_variance_is_second_order_in_dt() {
        let p = ModelParams::reference();
        let roots = crate::params::characteristic_roots(&p).unwrap();
        let res = hedged_portfolio_experiment(
            &p,
            0.198586167337407,
            &roots,
            12.0,
            &[1e-2, 5e-3, 2.5e-3],
            20_000,
            31,
        )
        .unwrap();
        assert_abs_diff_eq!(res.slope_unhedged, 1.0, epsilon = 0.2);
        assert_abs_diff_eq!(res.slope_hedged, 2.0, epsilon = 0.2);
        assert!(res.variance_ratio > 100.0);
        for rung in &res.rungs {
            assert!(rung.var_hedged >= 0.0 && rung.var_unhedged >= 0.0);
            assert!(rung.var_hedged < rung.var_unhedged);
        }
    }
}
