//! Model parameters, the rate identities, and the characteristic equation.
//!
//! Money issuance follows the geometric Brownian motion
//! `ds/s = a dt + sigma dz` in an economy with riskless rate `r` and current
//! yield `delta`. The expected return on issuance-linked claims decomposes as
//!
//! ```text
//! mu = delta + a = r + lambda * sigma
//! ```
//!
//! so `mu` and the market price of risk `lambda` are always derived from the
//! stored fields, never stored themselves. Perpetual claims proportional to
//! `s^beta` are consistent with the pricing dynamics exactly when `beta`
//! solves the characteristic quadratic
//!
//! ```text
//! 0.5 sigma^2 beta (beta - 1) + (r - delta) beta - r = 0
//! ```
//!
//! whose roots straddle the unit exponent: `beta_minus < 0 < 1 < beta_plus`
//! whenever `r > 0` and `delta > 0`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reference;

/// Economy-wide constants. Rates are per annum, volatility per square-root
/// annum, and the debt/issuance scales are in trillions of currency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Riskless rate `r` (per annum).
    pub r: f64,
    /// Current yield `delta` paid by outstanding debt (per annum).
    pub delta: f64,
    /// Issuance drift `a` (per annum). Zero and negative drifts are allowed.
    pub a: f64,
    /// Issuance volatility `sigma` (per sqrt-annum).
    pub sigma: f64,
    /// Par (face) value of outstanding debt `F`, in trillions.
    #[serde(rename = "F")]
    pub par: f64,
    /// Initial money issuance `s0`, in trillions per annum.
    pub s0: f64,
}

impl ModelParams {
    /// Build a parameter set, enforcing finiteness everywhere and positivity
    /// of `r`, `delta`, `sigma`, `F`, and `s0`.
    pub fn new(r: f64, delta: f64, a: f64, sigma: f64, par: f64, s0: f64) -> Result<Self> {
        let p = Self {
            r,
            delta,
            a,
            sigma,
            par,
            s0,
        };
        p.check_fields()?;
        Ok(p)
    }

    /// The published example economy reproduced by the golden tables:
    /// r = 5%, delta = 4.5%, a = 2.5%, sigma = 15%, F = 200, s0 = 9.6.
    pub fn reference() -> Self {
        Self {
            r: reference::R,
            delta: reference::DELTA,
            a: reference::A,
            sigma: reference::SIGMA,
            par: reference::PAR,
            s0: reference::S0,
        }
    }

    /// Expected rate of return on issuance-linked claims, `mu = delta + a`.
    pub fn mu(&self) -> f64 {
        self.delta + self.a
    }

    /// Market price of risk `lambda = (mu - r) / sigma`.
    pub fn risk_price(&self) -> Result<f64> {
        if self.sigma == 0.0 {
            return Err(Error::Domain(
                "risk price is undefined at sigma = 0".into(),
            ));
        }
        Ok((self.mu() - self.r) / self.sigma)
    }

    /// Drift of `ln s`: `nu = a - sigma^2 / 2`. When `nu > 0` every level
    /// above `s0` is reached almost surely.
    pub fn log_drift(&self) -> f64 {
        self.a - 0.5 * self.sigma * self.sigma
    }

    fn check_fields(&self) -> Result<()> {
        let positive: [(&'static str, f64); 5] = [
            ("r", self.r),
            ("delta", self.delta),
            ("sigma", self.sigma),
            ("F", self.par),
            ("s0", self.s0),
        ];
        for (field, value) in positive {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be finite, got {value}"),
                });
            }
            if value <= 0.0 {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be positive, got {value}"),
                });
            }
        }
        if !self.a.is_finite() {
            return Err(Error::InvalidParameter {
                field: "a",
                reason: format!("must be finite, got {}", self.a),
            });
        }
        Ok(())
    }
}

/// On-disk parameter file: flat TOML with keys `r`, `delta`, `a`, `sigma`,
/// `F`, `s0`. Unknown keys are rejected.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    r: f64,
    delta: f64,
    a: f64,
    sigma: f64,
    #[serde(rename = "F")]
    par: f64,
    s0: f64,
}

/// Parse parameters from TOML text.
pub fn params_from_toml(text: &str) -> Result<ModelParams> {
    let file: ParamsFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("params file: {e}")))?;
    ModelParams::new(file.r, file.delta, file.a, file.sigma, file.par, file.s0)
}

/// Load parameters from a TOML file on disk.
pub fn load_params(path: &Path) -> Result<ModelParams> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    params_from_toml(&text)
}

// ---------------------------------------------------------------------------
// Characteristic equation
// ---------------------------------------------------------------------------

/// The two real roots of the characteristic quadratic, sorted:
/// `beta_minus < 0 < 1 < beta_plus` for `r > 0`, `delta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicRoots {
    pub beta_minus: f64,
    pub beta_plus: f64,
}

impl CharacteristicRoots {
    /// Solve `0.5 sigma^2 beta(beta-1) + (r-delta) beta - r = 0` with the
    /// numerically stable quadratic formula (no cancellation between the
    /// roots).
    pub fn solve(r: f64, delta: f64, sigma: f64) -> Result<Self> {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::DegenerateEquation(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        if r < 0.0 || !r.is_finite() || !delta.is_finite() {
            return Err(Error::DegenerateEquation(format!(
                "rates must be finite with r >= 0, got r = {r}, delta = {delta}"
            )));
        }
        // Standard form: A beta^2 + B beta + C with
        //   A = sigma^2/2, B = (r - delta) - sigma^2/2, C = -r.
        let a2 = 0.5 * sigma * sigma;
        let b2 = (r - delta) - a2;
        let c2 = -r;
        let disc = b2 * b2 - 4.0 * a2 * c2;
        if disc <= 0.0 {
            // Unreachable for r > 0 (then A > 0, C < 0 forces disc > 0);
            // possible only in the r = 0, delta = 0 corner.
            return Err(Error::DegenerateEquation(format!(
                "non-positive discriminant {disc}"
            )));
        }
        let sign = if b2 >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (b2 + sign * disc.sqrt());
        let (r1, r2) = (q / a2, c2 / q);
        Ok(Self {
            beta_minus: r1.min(r2),
            beta_plus: r1.max(r2),
        })
    }
}

/// Residual of the characteristic quadratic at an arbitrary exponent.
pub fn characteristic_residual(beta: f64, r: f64, delta: f64, sigma: f64) -> f64 {
    0.5 * sigma * sigma * beta * (beta - 1.0) + (r - delta) * beta - r
}

/// Roots of the characteristic equation for a validated parameter set.
pub fn characteristic_roots(params: &ModelParams) -> Result<CharacteristicRoots> {
    CharacteristicRoots::solve(params.r, params.delta, params.sigma)
}

/// Market price of risk implied by the rate identities.
pub fn implied_risk_price(params: &ModelParams) -> Result<f64> {
    params.risk_price()
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

/// One identity check: name, outcome, and the numbers behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
}

/// A discrepancy note citing where the flagged value is printed in the
/// published source. Rendered with the `PAPER-NOTE:` prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub message: String,
    pub location: String,
}

impl Diagnostic {
    pub fn new(message: impl Into<String>, location: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            location: location.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PAPER-NOTE: {} [{}]", self.message, self.location)
    }
}

/// Identity findings plus printed-value discrepancy notes. Identity
/// violations are findings, never errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<IdentityCheck>,
    pub notes: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check the rate identities, positivity, the credit-expansion inequality
/// `beta_plus (1 - delta) > 1`, and the sign of the log-drift.
///
/// When the parameters are the published example economy, the report also
/// carries the printed-value discrepancy notes (risk price and negative
/// root).
pub fn validate_params(params: &ModelParams) -> Result<ValidationReport> {
    params.check_fields()?;
    let mu = params.mu();
    let lambda = params.risk_price()?;
    let mut checks = Vec::new();

    checks.push(IdentityCheck {
        name: "return decomposition mu = delta + a".into(),
        passed: true,
        measured: mu,
        expected: params.delta + params.a,
        tolerance: 0.0,
    });
    let pricing_residual = mu - (params.r + lambda * params.sigma);
    checks.push(IdentityCheck {
        name: "risk pricing mu = r + lambda sigma".into(),
        passed: pricing_residual.abs() <= 1e-12,
        measured: pricing_residual,
        expected: 0.0,
        tolerance: 1e-12,
    });
    let rate_residual = (params.r - params.delta) - (params.a - lambda * params.sigma);
    checks.push(IdentityCheck {
        name: "rate identity r - delta = a - lambda sigma".into(),
        passed: rate_residual.abs() <= 1e-12,
        measured: rate_residual,
        expected: 0.0,
        tolerance: 1e-12,
    });
    checks.push(IdentityCheck {
        name: "positivity of r, delta, sigma, F, s0".into(),
        passed: true,
        measured: params
            .r
            .min(params.delta)
            .min(params.sigma)
            .min(params.par)
            .min(params.s0),
        expected: 0.0,
        tolerance: 0.0,
    });

    let roots = characteristic_roots(params)?;
    let expansion = roots.beta_plus * (1.0 - params.delta);
    checks.push(IdentityCheck {
        name: "credit-expansion inequality beta_plus (1 - delta) > 1".into(),
        passed: expansion > 1.0,
        measured: expansion,
        expected: 1.0,
        tolerance: 0.0,
    });
    let nu = params.log_drift();
    checks.push(IdentityCheck {
        name: "log-drift sign a - sigma^2/2 > 0 (upper levels hit a.s.)".into(),
        passed: nu > 0.0,
        measured: nu,
        expected: 0.0,
        tolerance: 0.0,
    });

    let mut notes = Vec::new();
    if reference::is_reference_economy(params) {
        notes.push(Diagnostic::new(
            format!(
                "printed risk price lambda = {} is inconsistent with mu = r + lambda sigma: \
                 derived lambda = ({:.4} - {:.4}) / {:.4} = {:.4}",
                reference::LAMBDA_PRINTED,
                mu,
                params.r,
                params.sigma,
                lambda
            ),
            "numerical primer",
        ));
        notes.push(Diagnostic::new(
            format!(
                "printed negative root beta_1 = {} fails the characteristic quadratic \
                 (residual {:.4}); the quadratic's own root is {:.4}",
                reference::BETA_MINUS_PRINTED,
                characteristic_residual(
                    reference::BETA_MINUS_PRINTED,
                    params.r,
                    params.delta,
                    params.sigma
                ),
                roots.beta_minus
            ),
            "characteristic roots, numerical primer",
        ));
    }

    Ok(ValidationReport { checks, notes })
}
