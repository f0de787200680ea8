//! Machine-readable model report.
//!
//! One document bundles everything the analytic modules derive from a
//! parameter set: characteristic roots, cycle milestones, the milestone
//! table, default probabilities, the identity checks, and every diagnostic
//! note about printed-value discrepancies. Serialization is lossless —
//! floats are written with shortest round-trip precision and field order is
//! fixed by declaration — so a report can be archived and re-read bit for
//! bit.

use credit_cycle::cycle::{
    cycle_points, cycle_table, default_probabilities, natural_cycle_check, CyclePoints,
    DefaultRisk, TableRow,
};
use credit_cycle::params::{
    characteristic_roots, validate_params, CharacteristicRoots, Diagnostic, IdentityCheck,
};
use credit_cycle::{Mode, ModelParams, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub mode: Mode,
    pub params: ModelParams,
    pub roots: CharacteristicRoots,
    pub cycle: CyclePoints,
    pub probabilities: DefaultRisk,
    pub table: Vec<TableRow>,
    /// Numeric identity checks; all must pass for a well-posed economy.
    pub checks: Vec<IdentityCheck>,
    /// Notes on discrepancies against the published source values. Each one
    /// cites the location of the printed value it questions.
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report is serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Derive the full report for one economy.
pub fn build_report(params: &ModelParams, mode: Mode) -> Result<Report> {
    let roots = characteristic_roots(params)?;
    let cycle = cycle_points(params)?;
    let probabilities = default_probabilities(params, &cycle);
    let table = cycle_table(params, mode)?;
    let validation = validate_params(params)?;
    let expansion = natural_cycle_check(params, &probabilities);
    let mut diagnostics = validation.notes;
    diagnostics.extend(expansion.notes);
    Ok(Report {
        mode,
        params: *params,
        roots,
        cycle,
        probabilities,
        table,
        checks: validation.checks,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_losslessly() {
        let params = ModelParams::reference();
        let report = build_report(&params, Mode::FullPrecision).unwrap();
        let json = report.to_json();
        let back = Report::from_json(&json).unwrap();
        assert_eq!(report, back);
        assert_eq!(json, back.to_json());
    }

    #[test]
    fn every_diagnostic_cites_a_location() {
        let report = build_report(&ModelParams::reference(), Mode::FullPrecision).unwrap();
        assert!(!report.diagnostics.is_empty());
        for note in &report.diagnostics {
            assert!(!note.location.trim().is_empty(), "bare note: {note:?}");
        }
    }

    #[test]
    fn reference_economy_passes_all_checks() {
        let report = build_report(&ModelParams::reference(), Mode::FullPrecision).unwrap();
        assert!(report.all_checks_passed());
    }
}
