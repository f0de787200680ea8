//! Command-line interface for the credit-expansion cycle model.
//!
//! One economy per invocation: parameters come from `--params <file>` (TOML)
//! or default to the built-in published example. Each subcommand derives one
//! module's outputs and writes them as CSV/JSON artifacts into `--out <dir>`
//! (falling back to `$CREDIT_CYCLE_OUT`, then the current directory).
//!
//! Exit codes: `0` success, `2` unreadable or malformed configuration,
//! `3` parameter validation failure, `1` any other error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use credit_cycle::cycle::{
    balance_sheet, cycle_points, cycle_table, default_probabilities, divergence_scale,
    excess_money, natural_cycle_check, write_cycle_table_csv, BalancePoint, CyclePoints,
    DefaultRisk,
};
use credit_cycle::herding::{herding_new_debt, herding_regime_quantities, HerdingParams};
use credit_cycle::params::{
    characteristic_roots, load_params, validate_params, CharacteristicRoots,
};
use credit_cycle::reference::GAMMA_PRINTED;
use credit_cycle::sim::{cycle_passage_stats, passage_stats, terminal_moments, Scheme, SimConfig};
use credit_cycle::temporal::{temporal_grid, zero_money_singularity_report};
use credit_cycle::valuation::{new_debt_option, snapshot_grid, write_snapshot_csv};
use credit_cycle::{Mode, ModelParams};
use credit_cycle_cli::figures::{emit_figure_series, FigureKind};
use credit_cycle_cli::{output, report};
use serde::{Deserialize, Serialize};

const OUT_DIR_ENV: &str = "CREDIT_CYCLE_OUT";

#[derive(Parser)]
#[command(
    name = "credit-cycle",
    version,
    about = "Credit-expansion cycle analytics: debt valuations, cycle milestones, and seeded Monte Carlo"
)]
struct Cli {
    /// Parameter file (TOML with r, delta, a, sigma, F, s0). Defaults to the
    /// built-in published example economy.
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,

    /// Numeric mode for tables: full-precision or paper-rounded.
    #[arg(long, global = true, default_value_t = Mode::FullPrecision)]
    mode: Mode,

    /// Output directory for artifacts (default: $CREDIT_CYCLE_OUT, then ".").
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the parameter identities and write the full model report.
    Validate,
    /// Compute cycle milestones, default probabilities, and expansion scale.
    Points,
    /// Emit the milestone table as CSV.
    Table,
    /// Emit valuation curves (B, f, D, P, A, E, phase) on an issuance grid.
    SnapshotGrid {
        /// Lower end of the issuance grid.
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        /// Upper end of the issuance grid (default: 1.05 x collapse point).
        #[arg(long)]
        hi: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 400)]
        n: usize,
    },
    /// Run the Monte Carlo engine: terminal moments and milestone passages.
    Simulate {
        /// Master seed; each path draws from its own counter-derived stream.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of paths.
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        /// Time step in years.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Horizon in years.
        #[arg(long, default_value_t = 200.0)]
        horizon: f64,
        /// Update scheme: exact or euler.
        #[arg(long, default_value_t = Scheme::Exact)]
        scheme: Scheme,
        /// Comma-separated passage levels (default: cycle milestones above s0).
        #[arg(long, value_delimiter = ',')]
        levels: Vec<f64>,
    },
    /// Emit the herding-amplified new-debt series and regime quantities.
    Herding {
        /// Singularity exponent of the herding term.
        #[arg(long, default_value_t = GAMMA_PRINTED)]
        gamma: f64,
    },
    /// Emit expected money, debt, and assets through time as CSV.
    Temporal {
        /// Largest time on the grid, in years.
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Print the milestone balance sheets and the discrepancy notes.
    Ledger,
    /// Emit a plot-ready series for one analytic figure.
    Figures {
        /// One of: fig3, fig4, fig5, fig7, fig9, fig10, fig11, fig12-analogue.
        #[arg(long)]
        which: FigureKind,
    },
}

/// Milestone artifact for the `points` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PointsArtifact {
    params: ModelParams,
    roots: CharacteristicRoots,
    cycle: CyclePoints,
    probabilities: DefaultRisk,
    divergence_scale: f64,
    excess_money: f64,
}

/// Identity checks failed; distinct from unreadable configuration.
#[derive(Debug)]
struct ValidationFailed(usize);

impl std::fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} identity check(s) failed", self.0)
    }
}

impl std::error::Error for ValidationFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            classify(&err)
        }
    }
}

/// Map an error chain to the documented exit codes.
fn classify(err: &anyhow::Error) -> ExitCode {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<credit_cycle::Error>() {
            return match e {
                credit_cycle::Error::Config(_) => ExitCode::from(2),
                credit_cycle::Error::InvalidParameter { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            };
        }
        if cause.downcast_ref::<ValidationFailed>().is_some() {
            return ExitCode::from(3);
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return ExitCode::from(2);
        }
    }
    ExitCode::from(1)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let params = match &cli.params {
        Some(path) => load_params(path)
            .with_context(|| format!("loading parameters from {}", path.display()))?,
        None => ModelParams::reference(),
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    match cli.command {
        Command::Validate => {
            let report = report::build_report(&params, cli.mode)?;
            for check in &report.checks {
                let mark = if check.passed { '✓' } else { '✗' };
                println!(
                    "{mark} {} (measured {:.6e}, expected {:.6e}, tol {:.1e})",
                    check.name, check.measured, check.expected, check.tolerance
                );
            }
            for note in &report.diagnostics {
                println!("{note}");
            }
            let path = output::write_artifact(&out_dir, "report.json", &report.to_json())?;
            println!("report written to {}", path.display());
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(ValidationFailed(failed).into());
            }
        }
        Command::Points => {
            let roots = characteristic_roots(&params)?;
            let cycle = cycle_points(&params)?;
            let probabilities = default_probabilities(&params, &cycle);
            let artifact = PointsArtifact {
                params,
                roots,
                cycle,
                probabilities,
                divergence_scale: divergence_scale(&roots)?,
                excess_money: excess_money(&params, &roots)?,
            };
            println!("s_hat   = {:.6}", cycle.s_hat);
            if let Some(sm) = cycle.minsky_primary() {
                println!("s_m     = {sm:.6}");
            }
            println!("s_star  = {:.6}", cycle.s_star);
            println!("s_tilde = {:.6}", cycle.s_tilde);
            println!(
                "p(s_hat) = {:.3}, p(s*) = {:.3}, p(s~) = {:.3}",
                probabilities.p_hat, probabilities.p_star, probabilities.p_tilde
            );
            let path =
                output::write_artifact(&out_dir, "points.json", &output::to_pretty_json(&artifact))?;
            println!("points written to {}", path.display());
        }
        Command::Table => {
            let rows = cycle_table(&params, cli.mode)?;
            let mut buf = Vec::new();
            write_cycle_table_csv(&mut buf, &rows).expect("in-memory write cannot fail");
            let csv = String::from_utf8(buf).expect("CSV is UTF-8");
            print!("{csv}");
            let path = output::write_artifact(&out_dir, "table.csv", &csv)?;
            println!("table written to {}", path.display());
        }
        Command::SnapshotGrid { lo, hi, n } => {
            let points = cycle_points(&params)?;
            let hi = hi.unwrap_or(1.05 * points.s_tilde);
            let rows = snapshot_grid(&params, &points, lo, hi, n)?;
            let mut buf = Vec::new();
            write_snapshot_csv(&mut buf, &rows).expect("in-memory write cannot fail");
            let csv = String::from_utf8(buf).expect("CSV is UTF-8");
            let path = output::write_artifact(&out_dir, "snapshots.csv", &csv)?;
            println!(
                "{} snapshots on [{lo}, {hi}] written to {}",
                rows.len(),
                path.display()
            );
        }
        Command::Simulate {
            seed,
            paths,
            dt,
            horizon,
            scheme,
            levels,
        } => {
            let config = SimConfig {
                horizon,
                dt,
                n_paths: paths,
                seed,
                scheme,
            };
            let terminal = terminal_moments(&params, &config)?;
            let passage = if levels.is_empty() {
                let points = cycle_points(&params)?;
                cycle_passage_stats(&params, &points, &config)?
            } else {
                passage_stats(&params, &levels, &config)?
            };
            println!(
                "E[s_T] = {:.6} ± {:.6} at T = {} over {} paths",
                terminal.mean, terminal.se_mean, config.horizon, config.n_paths
            );
            for level in &passage.levels {
                match level.mean {
                    Some(mean) => println!(
                        "level {:.6}: hit fraction {:.4}, mean passage {mean:.4}",
                        level.level, level.hit_fraction
                    ),
                    None => println!("level {:.6}: never hit", level.level),
                }
            }
            let artifact = output::SimulationArtifact {
                config,
                terminal,
                passage,
            };
            let path = output::write_artifact(
                &out_dir,
                "simulation.json",
                &output::to_pretty_json(&artifact),
            )?;
            println!("simulation written to {}", path.display());
        }
        Command::Herding { gamma } => {
            let points = cycle_points(&params)?;
            let herding = HerdingParams::new(true, gamma, points.s_star)?;
            let mut csv = String::from("s,new_debt,new_debt_herding\n");
            let n = 400;
            let (lo, hi) = (0.5 * points.s_star, points.s_star - 1e-3);
            for i in 0..=n {
                let s = lo + (hi - lo) * i as f64 / n as f64;
                let bare = new_debt_option(points.k, points.beta, s);
                let amplified = herding_new_debt(points.k, points.beta, &herding, s)?;
                use std::fmt::Write as _;
                writeln!(csv, "{s},{bare},{amplified}").unwrap();
            }
            let artifact = output::HerdingArtifact {
                gamma,
                s_star: points.s_star,
                at_equilibrium: herding_regime_quantities(&params, &points, points.s_hat)?,
                at_critical: herding_regime_quantities(&params, &points, points.s_star)?,
            };
            println!(
                "at s_hat: equity {:.4}, leverage {:.4}, default {:.4}",
                artifact.at_equilibrium.equity,
                artifact.at_equilibrium.leverage,
                artifact.at_equilibrium.p_default
            );
            println!(
                "at s*:    equity {:.4}, leverage {}, default {:.4}",
                artifact.at_critical.equity,
                artifact.at_critical.leverage,
                artifact.at_critical.p_default
            );
            let csv_path = output::write_artifact(&out_dir, "herding.csv", &csv)?;
            let json_path = output::write_artifact(
                &out_dir,
                "herding.json",
                &output::to_pretty_json(&artifact),
            )?;
            println!(
                "herding series written to {}, regime to {}",
                csv_path.display(),
                json_path.display()
            );
        }
        Command::Temporal { horizon, n } => {
            let rows = temporal_grid(&params, horizon, n);
            let csv = output::temporal_csv(&rows);
            let path = output::write_artifact(&out_dir, "temporal.csv", &csv)?;
            let points = cycle_points(&params)?;
            let zero = zero_money_singularity_report(&params, &points)?;
            println!(
                "at the crisis clock: <M> = {}, P(s*) = {}, <A> = {:.6}",
                zero.money_at_crisis, zero.guarantee_at_critical, zero.assets_at_crisis
            );
            println!("{}", zero.interpretation);
            println!("temporal series written to {}", path.display());
        }
        Command::Ledger => {
            let points = cycle_points(&params)?;
            let probabilities = default_probabilities(&params, &points);
            let sheets: Vec<_> = [
                BalancePoint::Equilibrium,
                BalancePoint::CriticalRelending,
                BalancePoint::CriticalNewDebt,
                BalancePoint::Collapse,
            ]
            .into_iter()
            .map(|which| balance_sheet(&params, &points, which))
            .collect();
            let mut diagnostics = validate_params(&params)?.notes;
            diagnostics.extend(natural_cycle_check(&params, &probabilities).notes);
            for sheet in &sheets {
                let mark = if sheet.imbalance().abs() <= 1e-9 * sheet.asset_total().abs() {
                    '✓'
                } else {
                    '✗'
                };
                println!(
                    "{mark} {}: assets {:.4} vs liabilities {:.4}",
                    sheet.point,
                    sheet.asset_total(),
                    sheet.liability_total()
                );
            }
            for note in &diagnostics {
                println!("{note}");
            }
            let artifact = output::LedgerArtifact {
                sheets,
                diagnostics,
            };
            let path = output::write_artifact(
                &out_dir,
                "ledgers.json",
                &output::to_pretty_json(&artifact),
            )?;
            println!("ledgers written to {}", path.display());
        }
        Command::Figures { which } => {
            let csv = emit_figure_series(which, &params)?;
            let path = output::write_artifact(&out_dir, &format!("{which}.csv"), &csv)?;
            println!("{which} series written to {}", path.display());
        }
    }
    Ok(())
}
