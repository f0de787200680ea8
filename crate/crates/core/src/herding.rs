//! Herding correction to the new-debt function: a power-law singularity at
//! the critical point.
//!
//! When creditors herd, the relending demand blows up as the issuance level
//! approaches the critical point `s*` with a percolation-style exponent:
//!
//! ```text
//! f_h(s) = K s^beta + h * (s* - s)^{-gamma},    0 <= s < s*,  h in {0,1}
//! ```
//!
//! with `gamma = 2.39` by default. The singular term dominates every
//! polynomial as `s` approaches `s*` (its log-derivative ratio is the
//! constant `gamma`), so in the herding regime assets at the critical point
//! are driven down to the debt value itself: equity vanishes, leverage
//! diverges, and default is certain — in contrast to the no-herding
//! distance-to-default split `(beta-1)/beta < 1`.

use serde::{Deserialize, Serialize};

use crate::cycle::CyclePoints;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::reference;
use crate::valuation::{expected_debt, new_debt_option, valuation_snapshot};

/// Relative gap below which the singular term is evaluated at a clamped
/// distance instead of the true one: the returned value is the (finite)
/// value at `s* - 1e-12 s*`, a documented max-value marker rather than an
/// overflow or a spurious infinity.
pub const SINGULARITY_CLAMP: f64 = 1e-12;

/// Switch, exponent, and location of the herding singularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HerdingParams {
    /// Herding switch: `false` reduces everything to the plain power law.
    pub h: bool,
    /// Singularity exponent `gamma > 0`.
    pub gamma: f64,
    /// Location of the singularity (the critical point), trillions.
    pub s_star: f64,
}

impl HerdingParams {
    pub fn new(h: bool, gamma: f64, s_star: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "gamma",
                reason: format!("must be a positive finite exponent, got {gamma}"),
            });
        }
        if !(s_star > 0.0 && s_star.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "s_star",
                reason: format!("must be a positive finite level, got {s_star}"),
            });
        }
        Ok(Self { h, gamma, s_star })
    }

    /// The published rounded instance: `gamma = 2.39`, singularity at
    /// `s* = 15.43`, herding on.
    pub fn printed_instance() -> Self {
        Self {
            h: true,
            gamma: reference::GAMMA_PRINTED,
            s_star: reference::S_STAR_SINGULAR_PRINTED,
        }
    }
}

/// Distance to the singularity, clamped at `SINGULARITY_CLAMP * s_star`.
fn clamped_gap(herding: &HerdingParams, s: f64) -> f64 {
    (herding.s_star - s).max(SINGULARITY_CLAMP * herding.s_star)
}

/// The singular term `(s* - s)^{-gamma}`, evaluated in log-space and
/// clamped near the singularity (see [`SINGULARITY_CLAMP`]).
pub fn singular_term(herding: &HerdingParams, s: f64) -> Result<f64> {
    check_singular_domain(herding, s)?;
    if !herding.h {
        return Ok(0.0);
    }
    let gap = clamped_gap(herding, s);
    Ok((-herding.gamma * gap.ln()).exp())
}

/// Analytic derivative of the singular term,
/// `d/ds (s*-s)^{-gamma} = gamma (s*-s)^{-gamma-1}`.
pub fn singular_derivative(herding: &HerdingParams, s: f64) -> Result<f64> {
    check_singular_domain(herding, s)?;
    if !herding.h {
        return Ok(0.0);
    }
    let gap = clamped_gap(herding, s);
    Ok(herding.gamma * (-(herding.gamma + 1.0) * gap.ln()).exp())
}

/// Ratio of the singular term's derivative to `(s*-s)^{-gamma-1}`. Equals
/// `gamma` identically; exposed so the asymptotic order of the blow-up can
/// be asserted numerically rather than assumed.
pub fn singular_derivative_check(herding: &HerdingParams, s: f64) -> Result<f64> {
    let derivative = singular_derivative(herding, s)?;
    let gap = clamped_gap(herding, s);
    Ok(derivative / (-(herding.gamma + 1.0) * gap.ln()).exp())
}

fn check_singular_domain(herding: &HerdingParams, s: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!(
            "issuance level must be non-negative, got {s}"
        )));
    }
    if herding.h && s >= herding.s_star {
        return Err(Error::Domain(format!(
            "herding new-debt value is singular at s* = {}; s = {s} is not below it",
            herding.s_star
        )));
    }
    Ok(())
}

/// Herding-corrected new-debt value `K s^beta + h (s*-s)^{-gamma}`.
///
/// With `h = false` this is exactly [`new_debt_option`] on all of
/// `[0, inf)`; with `h = true` the domain is `[0, s*)` and the value
/// diverges at the boundary.
pub fn herding_new_debt(k: f64, beta: f64, herding: &HerdingParams, s: f64) -> Result<f64> {
    Ok(new_debt_option(k, beta, s) + singular_term(herding, s)?)
}

/// Equity, leverage, and default probability in the herding regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HerdingRegime {
    pub equity: f64,
    /// `f64::INFINITY` marks the leverage blow-up at the critical point.
    pub leverage: f64,
    pub p_default: f64,
}

/// Balance-sheet quantities under the herding convention, for `s <= s*`.
///
/// Below the critical point these are the standard snapshot quantities
/// (`E = A - D`, leverage `A/E`, default measured as `D/A`). At `s = s*`
/// herding drives assets down to the debt value itself: equity is zero,
/// leverage is the infinity marker, and default is certain.
pub fn herding_regime_quantities(
    params: &ModelParams,
    points: &CyclePoints,
    s: f64,
) -> Result<HerdingRegime> {
    if s > points.s_star {
        return Err(Error::Domain(format!(
            "herding regime is defined up to the critical point {}, got s = {s}",
            points.s_star
        )));
    }
    if s == points.s_star {
        return Ok(HerdingRegime {
            equity: 0.0,
            leverage: f64::INFINITY,
            p_default: 1.0,
        });
    }
    let snap = valuation_snapshot(params, points, s)?;
    let leverage = if snap.equity == 0.0 {
        f64::INFINITY
    } else {
        snap.assets / snap.equity
    };
    Ok(HerdingRegime {
        equity: snap.equity,
        leverage,
        p_default: snap.market_debt / snap.assets,
    })
}

/// At the critical point under herding, assets equal the debt value
/// `B(s*)`, so the surviving share `(A - D)/A` collapses to `1/beta` — the
/// residual the no-herding distance-to-default keeps.
pub fn surviving_share_at_critical(params: &ModelParams, points: &CyclePoints) -> f64 {
    let assets = expected_debt(params, points.s_star);
    (assets - params.par) / assets
}
