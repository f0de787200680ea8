//! Expected aggregates in calendar time and the zero-money crisis marker.
//!
//! Integrating the expected issuance `<s_t> = s0 e^{at}` gives closed forms
//! for the cumulated money stock, the debt value, and total assets:
//!
//! ```text
//! <M(t)> = (s0/a)(e^{at} - 1)         cumulated issuance
//! <B(t)> = s0 e^{at} / delta          debt value at the expected level
//! <A(t)> = (s0/a)((mu/delta) e^{at} - 1)
//! ```
//!
//! and the additivity `<A> = <M> + <B>` holds identically because
//! `mu = delta + a`. All three are evaluated through `exp_m1` so the
//! `a -> 0` limits (`<M> -> s0 t`, `<A> -> s0 t + s0/delta`) are reached
//! continuously rather than through 0/0 cancellation; `a = 0` exactly takes
//! the limit branch.
//!
//! At the crisis time (the critical point reached, clock restarted at
//! `t* = 0` with `s0` set to `s*`), the cumulated money stock is the empty
//! integral and the par guarantee is worthless: `<M(t*)> = P(s*) = 0`. The
//! report labels this as a singularity manifestation — the bookkeeping
//! signature of the crisis — not a literal zero money stock.

use serde::{Deserialize, Serialize};

use crate::cycle::CyclePoints;
use crate::error::Result;
use crate::params::ModelParams;
use crate::valuation::{valuation_snapshot, ValuationSnapshot};

/// Expected aggregates at one calendar time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalSnapshot {
    /// Years since the start of the expansion.
    pub t: f64,
    /// Cumulated money stock `<M(t)>`, trillions.
    pub money: f64,
    /// Debt value `<B(t)>`, trillions.
    pub debt: f64,
    /// Total assets `<A(t)> = <M(t)> + <B(t)>`, trillions.
    pub assets: f64,
}

/// Cumulated expected issuance `<M(t)> = (s0/a)(e^{at} - 1)`, with the
/// drift-free limit `s0 t`.
pub fn expected_money_aggregate(params: &ModelParams, t: f64) -> f64 {
    if params.a == 0.0 {
        return params.s0 * t;
    }
    params.s0 / params.a * (params.a * t).exp_m1()
}

/// Debt value at the expected issuance level, `<B(t)> = s0 e^{at}/delta`.
pub fn expected_debt_time(params: &ModelParams, t: f64) -> f64 {
    params.s0 * (params.a * t).exp() / params.delta
}

/// Expected total assets `<A(t)> = (s0/a)((mu/delta) e^{at} - 1)`, returned
/// as a full snapshot so the additivity with `<M>` and `<B>` is visible.
///
/// The asset value is computed from its own expression (rearranged to the
/// `exp_m1`-stable form `(s0 mu/(a delta)) (e^{at}-1) + s0/delta`), not as
/// the sum of the other two fields; the additivity is a checkable identity,
/// not a definition.
pub fn expected_assets_time(params: &ModelParams, t: f64) -> TemporalSnapshot {
    let assets = if params.a == 0.0 {
        params.s0 * t + params.s0 / params.delta
    } else {
        params.s0 * params.mu() / (params.a * params.delta) * (params.a * t).exp_m1()
            + params.s0 / params.delta
    };
    TemporalSnapshot {
        t,
        money: expected_money_aggregate(params, t),
        debt: expected_debt_time(params, t),
        assets,
    }
}

/// Snapshots on a uniform time grid over `[0, t_max]`, endpoints included.
pub fn temporal_grid(params: &ModelParams, t_max: f64, n: usize) -> Vec<TemporalSnapshot> {
    let n = n.max(2);
    let step = t_max / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let t = if i == n - 1 { t_max } else { step * i as f64 };
            expected_assets_time(params, t)
        })
        .collect()
}

/// The zero-money crisis marker at the critical point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroMoneyReport {
    /// `<M(t*)>` with the crisis clock `t* = 0`: exactly zero.
    pub money_at_crisis: f64,
    /// Par guarantee at the critical point, zero by value matching.
    pub guarantee_at_critical: f64,
    /// `<A(t*)>` with `s0` set to `s*`: equals `B(s*)`.
    pub assets_at_crisis: f64,
    /// Debt value at the critical point, for comparison.
    pub debt_at_critical: f64,
    /// What the coincidence means.
    pub interpretation: String,
}

/// Restart the clock at the moment the critical point is reached and report
/// the zero-money coincidence `<M(t*)> = P(s*) = 0`.
pub fn zero_money_singularity_report(
    params: &ModelParams,
    points: &CyclePoints,
) -> Result<ZeroMoneyReport> {
    let mut at_crisis = *params;
    at_crisis.s0 = points.s_star;
    let snap_t = expected_assets_time(&at_crisis, 0.0);
    let snap_s: ValuationSnapshot = valuation_snapshot(params, points, points.s_star)?;
    Ok(ZeroMoneyReport {
        money_at_crisis: snap_t.money,
        guarantee_at_critical: snap_s.guarantee,
        assets_at_crisis: snap_t.assets,
        debt_at_critical: snap_s.expected_debt,
        interpretation: "singularity manifestation: the cumulated money stock and the par \
                         guarantee vanish together at the crisis time — a bookkeeping \
                         signature of the critical point, not a literal zero money stock"
            .into(),
    })
}
