//! Printed constants of the published example economy.
//!
//! The published worked example uses one economy throughout: `r = 0.05`,
//! `delta = 0.045`, `a = 0.025`, `sigma = 0.15`, `F = 200`, `s0 = 9.6`.
//! Every number printed for that economy — rounded roots, cycle milestones,
//! table cells — is frozen here verbatim so that golden-output tests compare
//! against the printed digits rather than against our own higher-precision
//! recomputation. Where a printed value disagrees with its own defining
//! formula the discrepancy is surfaced as a `PAPER-NOTE` diagnostic (see
//! [`crate::params::validate_params`]); the constant still records the
//! printed digits.

use crate::params::ModelParams;

/// Riskless rate of the example economy.
pub const R: f64 = 0.05;
/// Current yield of the example economy.
pub const DELTA: f64 = 0.045;
/// Issuance drift of the example economy.
pub const A: f64 = 0.025;
/// Issuance volatility of the example economy.
pub const SIGMA: f64 = 0.15;
/// Par value of outstanding debt (trillions).
pub const PAR: f64 = 200.0;
/// Initial money issuance (trillions per annum).
pub const S0: f64 = 9.6;

/// Printed market price of risk. Inconsistent with `mu = r + lambda sigma`,
/// which gives 0.1333; flagged by validation.
pub const LAMBDA_PRINTED: f64 = 0.45;
/// Printed expected return `mu = delta + a` (this one is consistent).
pub const MU_PRINTED: f64 = 0.07;
/// Printed negative characteristic root. Fails the quadratic (true root is
/// -1.8486); flagged by validation.
pub const BETA_MINUS_PRINTED: f64 = -0.099;
/// Printed positive characteristic root, four published decimals.
pub const BETA_PLUS_PRINTED: f64 = 2.404;
/// The rounded exponent the printed tables actually use downstream.
pub const BETA_ROUNDED: f64 = 2.4;
/// New-debt scale coefficient as printed (rounded from 0.19859).
pub const K_ROUNDED: f64 = 0.2;
/// Printed relending boundary in the milestone table.
pub const S_STAR_PRINTED: f64 = 15.5;
/// Relending boundary as printed in the herding example (one more decimal).
pub const S_STAR_SINGULAR_PRINTED: f64 = 15.43;
/// Printed collapse point.
pub const S_TILDE_PRINTED: f64 = 28.9;
/// Printed market debt value at the collapse point.
pub const B_TILDE_PRINTED: f64 = 642.6;
/// Printed herding singularity exponent.
pub const GAMMA_PRINTED: f64 = 2.39;

/// Milestone table as printed: `(label, s, D, B, f, P, p_default)`.
/// The second row is the log-distance row; it has no `s` column and its
/// label carries the printed log-distance value.
pub const MILESTONE_TABLE_PRINTED: [(&str, Option<f64>, Option<f64>, Option<f64>, Option<f64>, Option<f64>, f64); 4] = [
    (
        "s_hat",
        Some(9.0),
        Some(161.0),
        Some(200.0),
        Some(39.0),
        Some(39.0),
        0.195,
    ),
    ("omega=2.130", None, None, None, None, None, 0.315),
    (
        "s_star",
        Some(15.5),
        Some(200.0),
        Some(342.9),
        Some(142.9),
        Some(0.0),
        0.417,
    ),
    (
        "s_tilde",
        Some(28.9),
        Some(0.0),
        Some(642.6),
        Some(642.6),
        Some(0.0),
        1.000,
    ),
];

/// Printed balance-sheet decomposition at the equilibrium point:
/// `(assets, debt, equity, leverage, debt_to_assets)`.
pub const EQUILIBRIUM_SHEET_PRINTED: (f64, f64, f64, f64, f64) =
    (239.1, 160.9, 78.2, 3.06, 0.673);

/// Two derived quantities the herding example prints: the singular exponent
/// and the boundary it blows up at.
pub const HERDING_INSTANCE_PRINTED: (f64, f64) = (GAMMA_PRINTED, S_STAR_SINGULAR_PRINTED);

/// True when `params` equals the example economy to within floating-point
/// identity (1e-12 relative on every field).
pub fn is_reference_economy(params: &ModelParams) -> bool {
    let fields = [
        (params.r, R),
        (params.delta, DELTA),
        (params.a, A),
        (params.sigma, SIGMA),
        (params.par, PAR),
        (params.s0, S0),
    ];
    fields
        .iter()
        .all(|(got, want)| (got - want).abs() <= 1e-12 * want.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_constructor_is_detected() {
        assert!(is_reference_economy(&ModelParams::reference()));
        let mut p = ModelParams::reference();
        p.a = 0.026;
        assert!(!is_reference_economy(&p));
    }

    #[test]
    fn milestone_table_shape() {
        assert_eq!(MILESTONE_TABLE_PRINTED.len(), 4);
        // Log-distance row has no state column.
        assert!(MILESTONE_TABLE_PRINTED[1].1.is_none());
        // Default probability column is monotone down the cycle.
        let ps: Vec<f64> = MILESTONE_TABLE_PRINTED.iter().map(|row| row.6).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }
}
