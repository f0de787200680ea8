//! Closed-form claim values along the money-issuance axis.
//!
//! With issuance `s` following `ds/s = a dt + sigma dz` and claims earning
//! `mu = delta + a`, the aggregate debt-service claim is worth the perpetuity
//!
//! ```text
//! B(s) = E int_0^inf s(t) e^{-mu t} dt = s / delta
//! ```
//!
//! and the option to issue new debt against future expansion is the power
//! solution `f(s) = K s^beta` with `beta = beta_plus > 1` from the
//! characteristic quadratic. Everything else is bookkeeping on top of the
//! pair `(B, f)`:
//!
//! * outstanding ("old") debt trades at `D(s) = B(s) - f(s)`,
//! * the par guarantee is worth `P(s) = F_eff(s) - D(s)`,
//! * effective par `F_eff` is `F` up to the relending boundary `s*`, erodes
//!   as `D(s)` on `(s*, s~)`, and is zero from the collapse point `s~` on,
//! * aggregate assets are `A = B + f` (post-collapse: `A = f`), and equity
//!   is `E = A - D = 2 f(s)`.
//!
//! `D` rises to its maximum `D(s*) = F` (smooth pasting makes `D'(s*) = 0`)
//! and then falls to zero at `s~`, which is what makes the credit cycle a
//! cycle. Deterministic side-calculations — fixed-coupon annuities and the
//! paydown path of a debt balance under a coupon schedule — live here too,
//! since they share the same discounting conventions.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::cycle::{classify_phase, CyclePoints, Phase};
use crate::error::{Error, Result};
use crate::numeric::integrate;
use crate::params::ModelParams;

/// Value of the aggregate debt-service claim, `B(s) = s / delta`.
///
/// This is the perpetuity value of the current issuance stream discounted at
/// the risk-adjusted rate `mu`, of which `delta = mu - a` survives growth.
pub fn expected_debt(params: &ModelParams, s: f64) -> f64 {
    s / params.delta
}

/// Value of the new-debt (relending) option, `f(s) = K s^beta`.
pub fn new_debt_option(k: f64, beta: f64, s: f64) -> f64 {
    k * s.powf(beta)
}

/// Residual of the pricing ODE satisfied by `B(s) = s/delta`:
/// `0.5 sigma^2 s^2 B'' + (r - delta) s B' - r B + s`. Analytically zero.
pub fn ode_residual_expected_debt(params: &ModelParams, s: f64) -> f64 {
    // B'' = 0, B' = 1/delta.
    (params.r - params.delta) * s / params.delta - params.r * s / params.delta + s
}

/// Residual of the homogeneous pricing ODE satisfied by `f(s) = K s^beta`:
/// `0.5 sigma^2 s^2 f'' + (r - delta) s f' - r f`. Zero whenever `beta`
/// solves the characteristic quadratic.
pub fn ode_residual_new_debt(params: &ModelParams, k: f64, beta: f64, s: f64) -> f64 {
    let f = new_debt_option(k, beta, s);
    let f1 = k * beta * s.powf(beta - 1.0);
    let f2 = k * beta * (beta - 1.0) * s.powf(beta - 2.0);
    0.5 * params.sigma * params.sigma * s * s * f2 + (params.r - params.delta) * s * f1
        - params.r * f
}

/// Terminal payoffs of the par claim split into its option legs:
/// `(call, put) = ([b - par]^+, [par - b]^+)`. Used for figure data; the
/// in-cycle guarantee value is the identity-consistent `F_eff - D`, not this
/// literal payoff.
pub fn maturity_payoffs(par: f64, b: f64) -> (f64, f64) {
    ((b - par).max(0.0), (par - b).max(0.0))
}

/// All claim values at one issuance level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValuationSnapshot {
    /// Money issuance level (trillions per annum).
    pub s: f64,
    /// Aggregate debt-service claim `B = s/delta`.
    #[serde(rename = "B")]
    pub expected_debt: f64,
    /// New-debt option `f = K s^beta`.
    #[serde(rename = "f")]
    pub new_debt: f64,
    /// Market value of outstanding debt `D = B - f` (zero after collapse).
    #[serde(rename = "D")]
    pub market_debt: f64,
    /// Par guarantee `P = F_eff - D`.
    #[serde(rename = "P")]
    pub guarantee: f64,
    /// Aggregate assets `A = B + f` (post-collapse: `f`).
    #[serde(rename = "A")]
    pub assets: f64,
    /// Aggregate equity `E = A - D`.
    #[serde(rename = "E")]
    pub equity: f64,
    /// Effective par outstanding.
    #[serde(rename = "F_eff")]
    pub effective_par: f64,
    /// Cycle phase at `s`.
    pub phase: Phase,
}

/// Claim values at issuance level `s >= 0`. Levels at or past the collapse
/// point return the post-collapse configuration (old debt and guarantee
/// worthless, only the new-debt claim trades).
pub fn valuation_snapshot(
    params: &ModelParams,
    points: &CyclePoints,
    s: f64,
) -> Result<ValuationSnapshot> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!(
            "issuance level must be non-negative, got {s}"
        )));
    }
    let b = expected_debt(params, s);
    let f = new_debt_option(points.k, points.beta, s);
    let phase = classify_phase(points, s);

    let (market_debt, guarantee, effective_par, assets, equity);
    if s >= points.s_tilde {
        market_debt = 0.0;
        guarantee = 0.0;
        effective_par = 0.0;
        assets = f;
        equity = f;
    } else {
        market_debt = b - f;
        if s > points.s_star {
            guarantee = 0.0;
            effective_par = market_debt;
        } else {
            guarantee = (params.par - market_debt).max(0.0);
            effective_par = market_debt + guarantee;
        }
        assets = b + f;
        equity = assets - market_debt;
    }

    Ok(ValuationSnapshot {
        s,
        expected_debt: b,
        new_debt: f,
        market_debt,
        guarantee,
        assets,
        equity,
        effective_par,
        phase,
    })
}

/// Like [`valuation_snapshot`] but refuses levels strictly past the collapse
/// point instead of returning the post-collapse configuration.
pub fn valuation_snapshot_strict(
    params: &ModelParams,
    points: &CyclePoints,
    s: f64,
) -> Result<ValuationSnapshot> {
    if s > points.s_tilde {
        return Err(Error::PostCollapse {
            s,
            s_tilde: points.s_tilde,
        });
    }
    valuation_snapshot(params, points, s)
}

/// Assets over equity. Returns `f64::INFINITY` when equity is zero (the
/// `s = 0` corner). Strictly decreasing in `s` and exactly 1 at collapse.
pub fn leverage(snapshot: &ValuationSnapshot) -> f64 {
    if snapshot.equity == 0.0 {
        f64::INFINITY
    } else {
        snapshot.assets / snapshot.equity
    }
}

/// Uniform grid of snapshots on `[s_lo, s_hi]`, endpoints included.
pub fn snapshot_grid(
    params: &ModelParams,
    points: &CyclePoints,
    s_lo: f64,
    s_hi: f64,
    n: usize,
) -> Result<Vec<ValuationSnapshot>> {
    if n < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {n}")));
    }
    if !(s_lo >= 0.0 && s_hi > s_lo) {
        return Err(Error::Domain(format!(
            "grid bounds must satisfy 0 <= lo < hi, got [{s_lo}, {s_hi}]"
        )));
    }
    let step = (s_hi - s_lo) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let s = if i == n - 1 { s_hi } else { s_lo + step * i as f64 };
            valuation_snapshot(params, points, s)
        })
        .collect()
}

/// Write snapshots as CSV: header `s,B,f,D,P,A,E,F_eff,phase`, one row per
/// snapshot, full-precision decimal numbers, `\n` line endings.
pub fn write_snapshot_csv<W: Write>(mut w: W, rows: &[ValuationSnapshot]) -> io::Result<()> {
    writeln!(w, "s,B,f,D,P,A,E,F_eff,phase")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            row.s,
            row.expected_debt,
            row.new_debt,
            row.market_debt,
            row.guarantee,
            row.assets,
            row.equity,
            row.effective_par,
            row.phase
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Deterministic fixed-income helpers
// ---------------------------------------------------------------------------

/// A constant-coupon stream discounted at a flat rate. `maturity` may be
/// `f64::INFINITY` for a perpetuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnuitySpec {
    /// Coupon flow per annum.
    pub coupon: f64,
    /// Flat discount rate per annum.
    pub rate: f64,
    /// Years of payments; `INFINITY` for a perpetuity.
    pub maturity: f64,
}

/// Present value `c/r (1 - e^{-rT})`, with the `r = 0` limit `c T` and the
/// perpetuity limit `c/r`.
pub fn annuity_value(spec: &AnnuitySpec) -> Result<f64> {
    if spec.maturity < 0.0 || spec.maturity.is_nan() {
        return Err(Error::Domain(format!(
            "maturity must be non-negative, got {}",
            spec.maturity
        )));
    }
    if spec.rate == 0.0 {
        if spec.maturity.is_infinite() {
            return Err(Error::Domain(
                "perpetuity at zero rate has no finite value".into(),
            ));
        }
        return Ok(spec.coupon * spec.maturity);
    }
    if spec.maturity.is_infinite() {
        if spec.rate < 0.0 {
            return Err(Error::Domain(
                "perpetuity at negative rate has no finite value".into(),
            ));
        }
        return Ok(spec.coupon / spec.rate);
    }
    // -expm1(-rT)/r is stable for small r.
    Ok(spec.coupon * (-(-spec.rate * spec.maturity).exp_m1()) / spec.rate)
}

/// Debt balance at time `t` when the balance accrues at rate `growth` and a
/// coupon schedule `payment(tau)` flows out: solves
/// `b' = growth * b - payment(t)` by the integrating-factor formula, with the
/// schedule integral evaluated by adaptive quadrature (1e-10 absolute).
pub fn deterministic_debt_path<F: Fn(f64) -> f64>(
    b0: f64,
    growth: f64,
    payment: &F,
    t: f64,
) -> f64 {
    let discounted_payments = integrate(&|tau: f64| (-growth * tau).exp() * payment(tau), 0.0, t, 1e-10);
    (growth * t).exp() * (b0 - discounted_payments)
}

/// Closed form of [`deterministic_debt_path`] for a constant payment `m`:
/// `b(t) = b0 e^{gt} - m (e^{gt} - 1)/g`, with the `g = 0` limit `b0 - m t`.
pub fn deterministic_debt_path_const(b0: f64, growth: f64, m: f64, t: f64) -> f64 {
    if growth == 0.0 {
        return b0 - m * t;
    }
    let egt = (growth * t).exp();
    b0 * egt - m * (egt - 1.0) / growth
}
