//! Artifact writers: JSON documents and small CSV series.
//!
//! Everything written here is byte-deterministic for a fixed input: floats
//! use shortest round-trip formatting, JSON field order follows struct
//! declaration order, and line endings are LF.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use credit_cycle::cycle::Ledger;
use credit_cycle::herding::HerdingRegime;
use credit_cycle::params::Diagnostic;
use credit_cycle::sim::{PassageStats, SimConfig, TerminalMoments};
use credit_cycle::temporal::TemporalSnapshot;
use serde::{Deserialize, Serialize};

/// Simulation artifact: the plan that was run and both result blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationArtifact {
    pub config: SimConfig,
    pub terminal: TerminalMoments,
    pub passage: PassageStats,
}

/// Balance-sheet artifact: the four milestone ledgers plus the discrepancy
/// notes collected from validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerArtifact {
    pub sheets: Vec<Ledger>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Herding artifact: regime quantities at the equilibrium point and at the
/// critical point itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerdingArtifact {
    pub gamma: f64,
    pub s_star: f64,
    pub at_equilibrium: HerdingRegime,
    pub at_critical: HerdingRegime,
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("artifact is serializable");
    text.push('\n');
    text
}

/// `(t, M, B, A)` series.
pub fn temporal_csv(rows: &[TemporalSnapshot]) -> String {
    let mut csv = String::from("t,M,B,A\n");
    for row in rows {
        writeln!(csv, "{},{},{},{}", row.t, row.money, row.debt, row.assets).unwrap();
    }
    csv
}

/// Write an artifact file under `dir`, creating the directory if needed.
pub fn write_artifact(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}
