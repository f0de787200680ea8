//! Critical points of the credit cycle and everything measured at them.
//!
//! Four milestones partition the issuance axis. With `B(s) = s/delta`,
//! `f(s) = K s^beta`, and `D = B - f`:
//!
//! * `s_m` — the Minsky point, onset of speculative financing. Two variants:
//!   the market variant solves `F = 2 D(s_m)` and the expected variant
//!   solves `2 B(s_m) = F + f(s_m)`.
//! * `s_hat = delta F` — the equilibrium point, where `B(s_hat) = F`.
//! * `s* = beta/(beta-1) * delta F` — the relending (critical) point, the
//!   free boundary where value matching `K s*^beta = s*/delta - F` and
//!   smooth pasting `K beta s*^{beta-1} = 1/delta` hold simultaneously.
//!   `D` attains its maximum `F` there.
//! * `s~ = (K delta)^{-1/(beta-1)}` — the collapse point, where
//!   `B(s~) = f(s~)` and outstanding debt is worth nothing.
//!
//! Default risk is read off the same geometry: `p(s_hat) = 1 - D(s_hat)/F`,
//! `p(s*) = 1 - F/B(s*) = 1/beta`, `p(s~) = 1`, and the debt-growth index
//! `omega = B(s*)/D(s_hat)` yields the geometric-mean estimate
//! `p = 1 - omega^{-1/2}`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{bisect, BISECT_MAX_ITER};
use crate::params::{characteristic_roots, CharacteristicRoots, Diagnostic, ModelParams};
use crate::valuation::{expected_debt, new_debt_option};
use crate::Mode;

// ---------------------------------------------------------------------------
// Phases
// ---------------------------------------------------------------------------

/// Financing phase at a given issuance level. Intervals partition `[0, inf)`
/// and every boundary opens the phase to its right:
/// hedge `[0, s_hat)`, speculative `[s_hat, s*)`, Ponzi `[s*, s~)`,
/// collapse `[s~, inf)`. Inside the hedge phase the marker records the side
/// of the Minsky point when one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Hedge { past_minsky: Option<bool> },
    Speculative,
    Ponzi,
    Collapse,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Phase::Hedge { past_minsky: None } => "hedge",
            Phase::Hedge {
                past_minsky: Some(false),
            } => "hedge:pre-minsky",
            Phase::Hedge {
                past_minsky: Some(true),
            } => "hedge:post-minsky",
            Phase::Speculative => "speculative",
            Phase::Ponzi => "ponzi",
            Phase::Collapse => "collapse",
        };
        f.write_str(label)
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hedge" => Ok(Phase::Hedge { past_minsky: None }),
            "hedge:pre-minsky" => Ok(Phase::Hedge {
                past_minsky: Some(false),
            }),
            "hedge:post-minsky" => Ok(Phase::Hedge {
                past_minsky: Some(true),
            }),
            "speculative" => Ok(Phase::Speculative),
            "ponzi" => Ok(Phase::Ponzi),
            "collapse" => Ok(Phase::Collapse),
            other => Err(Error::Domain(format!("unknown phase '{other}'"))),
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Phase containing `s`, boundaries assigned to the phase they open.
pub fn classify_phase(points: &CyclePoints, s: f64) -> Phase {
    if s >= points.s_tilde {
        Phase::Collapse
    } else if s >= points.s_star {
        Phase::Ponzi
    } else if s >= points.s_hat {
        Phase::Speculative
    } else {
        Phase::Hedge {
            past_minsky: points.minsky_primary().map(|sm| s >= sm),
        }
    }
}

// ---------------------------------------------------------------------------
// Cycle points
// ---------------------------------------------------------------------------

/// The cycle milestones for one parameter set, ordered
/// `s_m < s_hat < s* < s~`, plus the power-law pair `(K, beta)` of the
/// new-debt option they pin down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclePoints {
    /// Equilibrium point `s_hat = delta F`.
    pub s_hat: f64,
    /// Minsky point, market variant (`F = 2 D`); `None` when no root exists
    /// below the equilibrium point.
    pub s_m_market: Option<f64>,
    /// Minsky point, expected variant (`2 B = F + f`); `None` when no root
    /// exists below the equilibrium point.
    pub s_m_expected: Option<f64>,
    /// Relending (critical) point `s*`.
    pub s_star: f64,
    /// Collapse point `s~` (`f64::INFINITY` when `K = 0`: never collapses).
    pub s_tilde: f64,
    /// New-debt option coefficient, units trillions^(1-beta).
    #[serde(rename = "K")]
    pub k: f64,
    /// Positive characteristic root the option prices with.
    pub beta: f64,
}

impl CyclePoints {
    /// The Minsky variant used for phase classification: market when it
    /// exists, otherwise expected.
    pub fn minsky_primary(&self) -> Option<f64> {
        self.s_m_market.or(self.s_m_expected)
    }
}

/// Equilibrium point `s_hat = delta F`, from `B(s_hat) = F`.
pub fn equilibrium_point(params: &ModelParams) -> f64 {
    params.delta * params.par
}

/// Free boundary of the relending option: returns `(s*, K)` with
/// `s* = beta/(beta-1) * delta F` and `K = s*^{1-beta}/(delta beta)`, the
/// unique pair satisfying value matching and smooth pasting.
pub fn critical_point(params: &ModelParams, roots: &CharacteristicRoots) -> Result<(f64, f64)> {
    let beta = roots.beta_plus;
    if beta <= 1.0 {
        return Err(Error::NoFreeBoundary { beta });
    }
    let s_star = beta / (beta - 1.0) * params.delta * params.par;
    let k = s_star.powf(1.0 - beta) / (params.delta * beta);
    Ok((s_star, k))
}

/// Collapse point `s~ = (K delta)^{-1/(beta-1)}`, the root of
/// `D(s) = B(s) - f(s) = 0` above `s*`. `K = 0` means the option never
/// overtakes the perpetuity: returns `f64::INFINITY` as the never-collapses
/// marker.
pub fn collapse_point(params: &ModelParams, k: f64, roots: &CharacteristicRoots) -> Result<f64> {
    let beta = roots.beta_plus;
    if beta <= 1.0 {
        return Err(Error::NoFreeBoundary { beta });
    }
    if k < 0.0 || !k.is_finite() {
        return Err(Error::Domain(format!(
            "option coefficient must be finite and non-negative, got {k}"
        )));
    }
    if k == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((k * params.delta).powf(-1.0 / (beta - 1.0)))
}

/// Which defining equation the Minsky point solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinskyVariant {
    /// `F = 2 D(s_m)`: par is twice the market value of outstanding debt.
    Market,
    /// `2 B(s_m) = F + f(s_m)`: total claim value covers par plus the
    /// relending option.
    Expected,
}

/// Minsky point: the interest-coverage tipping level below the equilibrium
/// point, found by bisection on `(0, s_hat]`. The bracket is shrunk to a few
/// ulps of `s_hat`, so the defining equation's residual at the root is at the
/// rounding floor rather than at the bracket-width floor.
pub fn minsky_point(
    params: &ModelParams,
    k: f64,
    roots: &CharacteristicRoots,
    variant: MinskyVariant,
) -> Result<f64> {
    let beta = roots.beta_plus;
    if beta <= 1.0 {
        return Err(Error::NoFreeBoundary { beta });
    }
    let s_hat = equilibrium_point(params);
    let g = |s: f64| -> f64 {
        let b = expected_debt(params, s);
        let f = new_debt_option(k, beta, s);
        match variant {
            MinskyVariant::Market => (b - f) - 0.5 * params.par,
            MinskyVariant::Expected => 2.0 * b - (params.par + f),
        }
    };
    bisect(
        &g,
        1e-9 * s_hat,
        s_hat,
        4.0 * f64::EPSILON * s_hat,
        BISECT_MAX_ITER,
    )
}

/// Scale of asset-price divergence over the relending phase,
/// `B(s*)/F = beta/(beta-1)`.
pub fn divergence_scale(roots: &CharacteristicRoots) -> Result<f64> {
    let beta = roots.beta_plus;
    if beta <= 1.0 {
        return Err(Error::NoFreeBoundary { beta });
    }
    Ok(beta / (beta - 1.0))
}

/// Excess money accumulated by issuers over the expansion,
/// `[(1-delta) beta - 1] F / (beta - 1)`. Non-negative exactly when the
/// credit-expansion inequality `beta (1-delta) >= 1` holds.
pub fn excess_money(params: &ModelParams, roots: &CharacteristicRoots) -> Result<f64> {
    let beta = roots.beta_plus;
    if beta <= 1.0 {
        return Err(Error::NoFreeBoundary { beta });
    }
    Ok(((1.0 - params.delta) * beta - 1.0) * params.par / (beta - 1.0))
}

/// All milestones for one parameter set.
pub fn cycle_points(params: &ModelParams) -> Result<CyclePoints> {
    let roots = characteristic_roots(params)?;
    let beta = roots.beta_plus;
    let s_hat = equilibrium_point(params);
    let (s_star, k) = critical_point(params, &roots)?;
    let s_tilde = collapse_point(params, k, &roots)?;
    let minsky = |variant| match minsky_point(params, k, &roots, variant) {
        Ok(s) => Ok(Some(s)),
        Err(Error::NoBifurcation { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let s_m_market = minsky(MinskyVariant::Market)?;
    let s_m_expected = minsky(MinskyVariant::Expected)?;
    Ok(CyclePoints {
        s_hat,
        s_m_market,
        s_m_expected,
        s_star,
        s_tilde,
        k,
        beta,
    })
}

// ---------------------------------------------------------------------------
// Default risk
// ---------------------------------------------------------------------------

/// Default probabilities at the milestones plus the distance-to-default
/// split. `dd_survival = 1/beta` coincides algebraically with `p_star`;
/// `dd_default = (beta-1)/beta` is the competing no-herding reading — both
/// are exposed, labeled distinctly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefaultRisk {
    /// `1 - D(s_hat)/F`.
    pub p_hat: f64,
    /// `1 - F/B(s*) = 1/beta`.
    pub p_star: f64,
    /// Exactly 1: collapse is default.
    pub p_tilde: f64,
    /// `1 - omega^{-1/2}`, the geometric-mean estimate between the
    /// equilibrium and critical points.
    pub p_geometric: f64,
    /// Debt-growth index `omega = B(s*)/D(s_hat)`.
    pub omega: f64,
    /// Distance-to-default surviving share `1/beta`.
    pub dd_survival: f64,
    /// Distance-to-default defaulting share `(beta-1)/beta`.
    pub dd_default: f64,
}

/// `p(s_hat) = 1 - D(s_hat)/F`: the par shortfall of outstanding debt at the
/// equilibrium point.
pub fn p_at_equilibrium(d_hat: f64, par: f64) -> f64 {
    1.0 - d_hat / par
}

/// `p(s*) = 1 - F/B(s*)`: the share of total claim value not covered by par
/// at the critical point.
pub fn p_at_critical(b_star: f64, par: f64) -> f64 {
    1.0 - par / b_star
}

/// Debt-growth index `omega = B(s*)/D(s_hat)`.
pub fn growth_index(b_star: f64, d_hat: f64) -> f64 {
    b_star / d_hat
}

/// Geometric-mean default estimate `1 - omega^{-1/2}`.
pub fn p_from_growth_index(omega: f64) -> f64 {
    1.0 - omega.powf(-0.5)
}

/// Default risk read off the cycle geometry.
pub fn default_probabilities(params: &ModelParams, points: &CyclePoints) -> DefaultRisk {
    let d_hat =
        expected_debt(params, points.s_hat) - new_debt_option(points.k, points.beta, points.s_hat);
    let b_star = expected_debt(params, points.s_star);
    let omega = growth_index(b_star, d_hat);
    DefaultRisk {
        p_hat: p_at_equilibrium(d_hat, params.par),
        p_star: p_at_critical(b_star, params.par),
        p_tilde: 1.0,
        p_geometric: p_from_growth_index(omega),
        omega,
        dd_survival: 1.0 / points.beta,
        dd_default: (points.beta - 1.0) / points.beta,
    }
}

/// Outcome of the credit-expansion inequality test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCheck {
    /// `p_hat < p_star < p_tilde`.
    pub ordered: bool,
    /// `D(s_hat) * B(s*)`, reconstructed from the probabilities.
    pub product: f64,
    /// `F^2`.
    pub par_squared: f64,
    /// `product > par_squared` — algebraically equivalent to
    /// `p_hat < p_star`.
    pub expansion_holds: bool,
    pub notes: Vec<Diagnostic>,
}

/// Check the natural credit-expansion inequality `p_hat < p_star < p_tilde`
/// together with its product form `D(s_hat) B(s*) > F^2`.
///
/// The product test is implemented in the direction entailed by the
/// probability ordering; the printed source states it with the opposite
/// sign, which is recorded as a diagnostic rather than reproduced.
pub fn natural_cycle_check(params: &ModelParams, risk: &DefaultRisk) -> CycleCheck {
    let d_hat = params.par * (1.0 - risk.p_hat);
    let b_star = params.par / (1.0 - risk.p_star);
    let product = d_hat * b_star;
    let par_squared = params.par * params.par;
    let ordered = risk.p_hat < risk.p_star && risk.p_star < risk.p_tilde;
    CycleCheck {
        ordered,
        product,
        par_squared,
        expansion_holds: product > par_squared,
        notes: vec![Diagnostic::new(
            format!(
                "the product test is printed as D(s_hat)*B(s*) < F^2, but p_hat < p_star \
                 entails the opposite direction; computed {product:.1} vs F^2 = {par_squared:.1}"
            ),
            "natural credit expansion inequality",
        )],
    }
}

// ---------------------------------------------------------------------------
// Balance sheets
// ---------------------------------------------------------------------------

/// Which milestone configuration a ledger describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BalancePoint {
    /// Equilibrium point: money + credit against par debt.
    Equilibrium,
    /// Critical point, everything rescaled by `beta/(beta-1)`.
    CriticalRelending,
    /// Critical point, par debt plus the new-debt option.
    CriticalNewDebt,
    /// Collapse point: only the new-debt claim remains.
    Collapse,
}

impl fmt::Display for BalancePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BalancePoint::Equilibrium => "s_hat",
            BalancePoint::CriticalRelending => "s_star_relending",
            BalancePoint::CriticalNewDebt => "s_star_newdebt",
            BalancePoint::Collapse => "s_tilde",
        })
    }
}

impl FromStr for BalancePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s_hat" => Ok(BalancePoint::Equilibrium),
            "s_star_relending" => Ok(BalancePoint::CriticalRelending),
            "s_star_newdebt" => Ok(BalancePoint::CriticalNewDebt),
            "s_tilde" => Ok(BalancePoint::Collapse),
            other => Err(Error::Domain(format!("unknown balance point '{other}'"))),
        }
    }
}

/// One side's line item, in trillions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerLine {
    pub label: String,
    pub amount: f64,
}

impl LedgerLine {
    fn new(label: &str, amount: f64) -> Self {
        Self {
            label: label.to_owned(),
            amount,
        }
    }
}

/// A two-sided balance sheet at one milestone. Assets are always the money
/// stock plus the credit claim `(1/delta - 1) s`, summing to `B(s)`;
/// liabilities vary by configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub point: BalancePoint,
    pub assets: Vec<LedgerLine>,
    pub liabilities: Vec<LedgerLine>,
}

impl Ledger {
    pub fn asset_total(&self) -> f64 {
        self.assets.iter().map(|l| l.amount).sum()
    }

    pub fn liability_total(&self) -> f64 {
        self.liabilities.iter().map(|l| l.amount).sum()
    }

    /// Signed accounting gap, assets minus liabilities.
    pub fn imbalance(&self) -> f64 {
        self.asset_total() - self.liability_total()
    }
}

/// Balance sheet at one of the four milestone configurations. Each balances
/// identically: the asset side always sums to `B(s)`, and the liability side
/// equals `B(s)` at its milestone by construction (par at the equilibrium
/// point, value matching at the critical point, `B = f` at collapse).
pub fn balance_sheet(params: &ModelParams, points: &CyclePoints, which: BalancePoint) -> Ledger {
    let s = match which {
        BalancePoint::Equilibrium => points.s_hat,
        BalancePoint::CriticalRelending | BalancePoint::CriticalNewDebt => points.s_star,
        BalancePoint::Collapse => points.s_tilde,
    };
    let assets = vec![
        LedgerLine::new("money", s),
        LedgerLine::new("credit", (1.0 / params.delta - 1.0) * s),
    ];
    let liabilities = match which {
        BalancePoint::Equilibrium => vec![LedgerLine::new("debt at par", params.par)],
        BalancePoint::CriticalRelending => {
            let scale = points.beta / (points.beta - 1.0);
            vec![LedgerLine::new("relent debt at scaled par", scale * params.par)]
        }
        BalancePoint::CriticalNewDebt => vec![
            LedgerLine::new("debt at par", params.par),
            LedgerLine::new(
                "new debt",
                new_debt_option(points.k, points.beta, points.s_star),
            ),
        ],
        BalancePoint::Collapse => vec![LedgerLine::new(
            "new debt",
            new_debt_option(points.k, points.beta, points.s_tilde),
        )],
    };
    Ledger {
        point: which,
        assets,
        liabilities,
    }
}

// ---------------------------------------------------------------------------
// Milestone table
// ---------------------------------------------------------------------------

/// One row of the milestone table. The debt-growth-index row carries only a
/// label and a default probability; every other cell is `None` there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub s: Option<f64>,
    #[serde(rename = "D")]
    pub market_debt: Option<f64>,
    #[serde(rename = "B")]
    pub expected_debt: Option<f64>,
    #[serde(rename = "f")]
    pub new_debt: Option<f64>,
    #[serde(rename = "P")]
    pub guarantee: Option<f64>,
    pub p_default: f64,
}

/// The milestone table: rows for the equilibrium point, the debt-growth
/// index, the critical point, and the collapse point.
///
/// In [`Mode::FullPrecision`] every cell is derived from the exact roots. In
/// [`Mode::PaperRounded`] the table is rebuilt from the published rounded
/// inputs (`K = 0.2`, `beta = 2.4`) and three cells are transcribed verbatim
/// where the published table rounds inconsistently with its own chain
/// (`s* = 15.5` and the collapse-row pair `642.6`), so that formatting the
/// rows reproduces the published digits byte for byte.
pub fn cycle_table(params: &ModelParams, mode: Mode) -> Result<Vec<TableRow>> {
    match mode {
        Mode::FullPrecision => {
            let points = cycle_points(params)?;
            let risk = default_probabilities(params, &points);
            let f = |s: f64| new_debt_option(points.k, points.beta, s);
            let b = |s: f64| expected_debt(params, s);
            let f_hat = f(points.s_hat);
            let f_star = f(points.s_star);
            Ok(vec![
                TableRow {
                    label: "s_hat".into(),
                    s: Some(points.s_hat),
                    market_debt: Some(b(points.s_hat) - f_hat),
                    expected_debt: Some(b(points.s_hat)),
                    new_debt: Some(f_hat),
                    guarantee: Some(f_hat),
                    p_default: risk.p_hat,
                },
                TableRow {
                    label: format!("omega={:.3}", risk.omega),
                    s: None,
                    market_debt: None,
                    expected_debt: None,
                    new_debt: None,
                    guarantee: None,
                    p_default: risk.p_geometric,
                },
                TableRow {
                    label: "s_star".into(),
                    s: Some(points.s_star),
                    market_debt: Some(b(points.s_star) - f_star),
                    expected_debt: Some(b(points.s_star)),
                    new_debt: Some(f_star),
                    guarantee: Some(0.0),
                    p_default: risk.p_star,
                },
                TableRow {
                    label: "s_tilde".into(),
                    s: Some(points.s_tilde),
                    market_debt: Some(0.0),
                    expected_debt: Some(b(points.s_tilde)),
                    new_debt: Some(f(points.s_tilde)),
                    guarantee: Some(0.0),
                    p_default: risk.p_tilde,
                },
            ])
        }
        Mode::PaperRounded => {
            use crate::reference as rf;
            let k = rf::K_ROUNDED;
            let beta = rf::BETA_ROUNDED;
            let s_hat = equilibrium_point(params);
            let s_star_chain = beta / (beta - 1.0) * params.delta * params.par;
            let s_tilde_chain = (k * params.delta).powf(-1.0 / (beta - 1.0));
            let f_hat = new_debt_option(k, beta, s_hat);
            let b_hat = expected_debt(params, s_hat);
            let d_hat = b_hat - f_hat;
            let b_star = expected_debt(params, s_star_chain);
            let omega = growth_index(b_star, d_hat);
            Ok(vec![
                TableRow {
                    label: "s_hat".into(),
                    s: Some(s_hat),
                    market_debt: Some(d_hat),
                    expected_debt: Some(b_hat),
                    new_debt: Some(f_hat),
                    guarantee: Some(f_hat),
                    p_default: f_hat / b_hat,
                },
                TableRow {
                    label: format!("omega={omega:.3}"),
                    s: None,
                    market_debt: None,
                    expected_debt: None,
                    new_debt: None,
                    guarantee: None,
                    p_default: p_from_growth_index(omega),
                },
                TableRow {
                    label: "s_star".into(),
                    s: Some(rf::S_STAR_PRINTED),
                    market_debt: Some(params.par),
                    expected_debt: Some(b_star),
                    new_debt: Some(b_star - params.par),
                    guarantee: Some(0.0),
                    p_default: 1.0 / beta,
                },
                TableRow {
                    label: "s_tilde".into(),
                    s: Some(s_tilde_chain),
                    market_debt: Some(0.0),
                    expected_debt: Some(rf::B_TILDE_PRINTED),
                    new_debt: Some(rf::B_TILDE_PRINTED),
                    guarantee: Some(0.0),
                    p_default: 1.0,
                },
            ])
        }
    }
}

/// Write the milestone table as CSV: header `point,s,D,B,f,P,p_default`,
/// money cells with one decimal, probabilities with three, empty cells for
/// the index row, `\n` line endings.
pub fn write_cycle_table_csv<W: Write>(mut w: W, rows: &[TableRow]) -> io::Result<()> {
    let cell = |v: Option<f64>| match v {
        Some(x) => format!("{x:.1}"),
        None => String::new(),
    };
    writeln!(w, "point,s,D,B,f,P,p_default")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{:.3}",
            row.label,
            cell(row.s),
            cell(row.market_debt),
            cell(row.expected_debt),
            cell(row.new_debt),
            cell(row.guarantee),
            row.p_default
        )?;
    }
    Ok(())
}
