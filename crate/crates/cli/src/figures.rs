//! Plot-ready series for the model's analytic figures.
//!
//! Each series is a plain CSV (comma separator, `.` decimal, header row, LF
//! line endings) with enough columns to redraw the figure in any plotting
//! tool; nothing here depends on a graphics library. Values are written with
//! shortest round-trip float formatting, so regenerating a series is
//! byte-stable.

use std::fmt::Write as _;
use std::str::FromStr;

use credit_cycle::cycle::cycle_points;
use credit_cycle::herding::{herding_new_debt, HerdingParams};
use credit_cycle::params::characteristic_residual;
use credit_cycle::reference::GAMMA_PRINTED;
use credit_cycle::sim::expected_money;
use credit_cycle::valuation::{
    expected_debt, maturity_payoffs, new_debt_option, snapshot_grid, valuation_snapshot,
};
use credit_cycle::{Error, ModelParams, Result};

/// Which analytic figure to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// Call leg `(B - F)^+` against the debt value.
    Fig3,
    /// Put leg `(F - B)^+` against the debt value.
    Fig4,
    /// Covered position `min(B, F)`: par short the put leg.
    Fig5,
    /// Leverage `A/E` along the issuance axis, diverging as `s -> 0`.
    Fig7,
    /// Characteristic polynomial of the pricing equation; crosses zero at
    /// `beta_minus` and `beta_plus`.
    Fig9,
    /// Valuation curves `B, f, D, P` with the phase label on `[0, 1.05 s~]`.
    Fig10,
    /// New-debt function with the herding term switched off and on, up to
    /// the critical point where the on-series diverges.
    Fig11,
    /// Bubble-and-crash composite: aggregate wealth along the mean issuance
    /// path, collapsing by half when the path reaches the collapse point.
    Fig12Analogue,
}

impl FigureKind {
    pub const ALL: [FigureKind; 8] = [
        FigureKind::Fig3,
        FigureKind::Fig4,
        FigureKind::Fig5,
        FigureKind::Fig7,
        FigureKind::Fig9,
        FigureKind::Fig10,
        FigureKind::Fig11,
        FigureKind::Fig12Analogue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureKind::Fig3 => "fig3",
            FigureKind::Fig4 => "fig4",
            FigureKind::Fig5 => "fig5",
            FigureKind::Fig7 => "fig7",
            FigureKind::Fig9 => "fig9",
            FigureKind::Fig10 => "fig10",
            FigureKind::Fig11 => "fig11",
            FigureKind::Fig12Analogue => "fig12-analogue",
        }
    }
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureKind::ALL
            .into_iter()
            .find(|kind| kind.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown figure '{s}' (expected one of fig3, fig4, fig5, fig7, fig9, \
                     fig10, fig11, fig12-analogue)"
                ))
            })
    }
}

impl std::fmt::Display for FigureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Tabulate one figure for the given economy. Returns the CSV text.
pub fn emit_figure_series(which: FigureKind, params: &ModelParams) -> Result<String> {
    let points = cycle_points(params)?;
    let mut csv = String::new();
    match which {
        FigureKind::Fig3 | FigureKind::Fig4 | FigureKind::Fig5 => {
            let header = match which {
                FigureKind::Fig3 => "B,call_leg",
                FigureKind::Fig4 => "B,put_leg",
                _ => "B,covered_position",
            };
            csv.push_str(header);
            csv.push('\n');
            let n = 400;
            for i in 0..=n {
                let b = 2.0 * params.par * i as f64 / n as f64;
                let (call, put) = maturity_payoffs(params.par, b);
                let y = match which {
                    FigureKind::Fig3 => call,
                    FigureKind::Fig4 => put,
                    _ => params.par - put,
                };
                writeln!(csv, "{b},{y}").unwrap();
            }
        }
        FigureKind::Fig7 => {
            csv.push_str("s,leverage\n");
            let n = 400;
            for i in 1..=n {
                let s = points.s_tilde * i as f64 / n as f64;
                let snap = valuation_snapshot(params, &points, s)?;
                let lev = credit_cycle::valuation::leverage(&snap);
                writeln!(csv, "{s},{lev}").unwrap();
            }
        }
        FigureKind::Fig9 => {
            csv.push_str("beta,polynomial\n");
            let n = 400;
            let (lo, hi) = (-3.0, 3.5);
            for i in 0..=n {
                let beta = lo + (hi - lo) * i as f64 / n as f64;
                let q = characteristic_residual(beta, params.r, params.delta, params.sigma);
                writeln!(csv, "{beta},{q}").unwrap();
            }
        }
        FigureKind::Fig10 => {
            let rows = snapshot_grid(params, &points, 0.0, 1.05 * points.s_tilde, 400)?;
            return Ok({
                let mut buf = Vec::new();
                credit_cycle::valuation::write_snapshot_csv(&mut buf, &rows)
                    .expect("in-memory write cannot fail");
                String::from_utf8(buf).expect("CSV is UTF-8")
            });
        }
        FigureKind::Fig11 => {
            csv.push_str("s,new_debt,new_debt_herding\n");
            let herding = HerdingParams::new(true, GAMMA_PRINTED, points.s_star)?;
            let n = 400;
            let (lo, hi) = (0.5 * points.s_star, points.s_star - 1e-3);
            for i in 0..=n {
                let s = lo + (hi - lo) * i as f64 / n as f64;
                let bare = new_debt_option(points.k, points.beta, s);
                let amplified = herding_new_debt(points.k, points.beta, &herding, s)?;
                writeln!(csv, "{s},{bare},{amplified}").unwrap();
            }
        }
        FigureKind::Fig12Analogue => {
            csv.push_str("t,wealth\n");
            if params.a <= 0.0 {
                return Err(Error::Domain(
                    "the mean issuance path never reaches the collapse point without \
                     expansionary drift a > 0"
                        .into(),
                ));
            }
            let t_collapse = (points.s_tilde / params.s0).ln() / params.a;
            let post_collapse = new_debt_option(points.k, points.beta, points.s_tilde);
            let n = 400;
            for i in 0..=n {
                let t = 1.5 * t_collapse * i as f64 / n as f64;
                let wealth = if t <= t_collapse {
                    let s = expected_money(params, t);
                    expected_debt(params, s) + new_debt_option(points.k, points.beta, s)
                } else {
                    post_collapse
                };
                writeln!(csv, "{t},{wealth}").unwrap();
            }
        }
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use credit_cycle::params::characteristic_roots;

    fn series_values(csv: &str, col: usize) -> Vec<f64> {
        csv.lines()
            .skip(1)
            .map(|line| line.split(',').nth(col).unwrap().parse().unwrap())
            .collect()
    }

    #[test]
    fn figure_names_round_trip() {
        for kind in FigureKind::ALL {
            assert_eq!(kind.name().parse::<FigureKind>().unwrap(), kind);
        }
        assert!("fig2".parse::<FigureKind>().is_err());
    }

    #[test]
    fn call_leg_is_zero_left_of_the_strike() {
        let params = ModelParams::reference();
        let csv = emit_figure_series(FigureKind::Fig3, &params).unwrap();
        for line in csv.lines().skip(1) {
            let mut cells = line.split(',');
            let b: f64 = cells.next().unwrap().parse().unwrap();
            let y: f64 = cells.next().unwrap().parse().unwrap();
            if b < params.par {
                assert_eq!(y, 0.0, "call leg nonzero at B={b}");
            } else {
                assert_eq!(y, b - params.par);
            }
        }
    }

    #[test]
    fn characteristic_series_crosses_zero_at_both_roots() {
        let params = ModelParams::reference();
        let roots = characteristic_roots(&params).unwrap();
        let csv = emit_figure_series(FigureKind::Fig9, &params).unwrap();
        let betas = series_values(&csv, 0);
        let values = series_values(&csv, 1);
        for root in [roots.beta_minus, roots.beta_plus] {
            let crossed = betas
                .windows(2)
                .zip(values.windows(2))
                .any(|(b, v)| b[0] <= root && root <= b[1] && v[0] * v[1] <= 0.0);
            assert!(crossed, "no sign change around root {root}");
        }
    }

    #[test]
    fn herding_series_diverges_near_the_critical_point() {
        let params = ModelParams::reference();
        let csv = emit_figure_series(FigureKind::Fig11, &params).unwrap();
        let bare = series_values(&csv, 1);
        let amplified = series_values(&csv, 2);
        assert!(amplified.last().unwrap() > &(100.0 * bare.last().unwrap()));
        for (b, a) in bare.iter().zip(&amplified) {
            assert!(a > b, "herding term must add value");
        }
    }

    #[test]
    fn crash_composite_halves_wealth_at_the_collapse_time() {
        let params = ModelParams::reference();
        let csv = emit_figure_series(FigureKind::Fig12Analogue, &params).unwrap();
        let wealth = series_values(&csv, 1);
        let peak = wealth.iter().cloned().fold(f64::MIN, f64::max);
        let last = *wealth.last().unwrap();
        assert!((peak / last - 2.0).abs() < 0.02, "peak {peak} vs floor {last}");
    }
}
