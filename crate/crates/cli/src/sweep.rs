//! Werner and Bloch reproduction sweeps. Every cell is computed twice, once
//! through the numeric pipeline and once from the closed forms, and the run
//! fails when the two disagree.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use entropic_core::analytic::{
    bisect, bloch_dd, bloch_entropy, bloch_md, bloch_mm, werner_conditional, werner_crossing,
    werner_dd, werner_md, werner_mm,
};
use entropic_core::entropy::{conditional, von_neumann};
use entropic_core::exec::{map_indexed, Execution};
use entropic_core::measure::{pi2_basis, qubit_basis};
use entropic_core::qstate::{bloch_qubit, werner, BlochParams, WernerParams};
use entropic_core::relations::{dd_memory, md_memory, memoryless_pair, mm_memory};
use entropic_core::Bits;

use crate::error::{CliError, Result};
use crate::format::{e12, table, Format};

/// Numeric vs closed-form agreement required per cell.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Residual at which the crossing bisection stops.
pub const CROSSING_RESIDUAL: f64 = 1e-10;

/// One grid point: parameters, then mm, md, dd and the entropy term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub params: [f64; 2],
    pub mm: Bits,
    pub md: Bits,
    pub dd: Bits,
    pub cond: Bits,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell {
    row: SweepRow,
    mismatch: f64,
}

fn mismatch(row: &SweepRow, analytic: [f64; 4]) -> f64 {
    [row.mm, row.md, row.dd, row.cond]
        .iter()
        .zip(analytic)
        .map(|(n, a)| (n - a).abs())
        // NaN propagates instead of being dropped by f64::max
        .fold(0.0, |acc: f64, d| {
            if d.is_nan() || acc.is_nan() {
                f64::NAN
            } else {
                acc.max(d)
            }
        })
}

fn grid(steps: usize, hi: f64) -> impl Fn(usize) -> f64 {
    move |i| {
        if i + 1 == steps {
            hi
        } else {
            hi * i as f64 / (steps - 1) as f64
        }
    }
}

fn check_steps(name: &str, steps: usize) -> Result<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!("{name} must be at least 2")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct WernerSweep {
    pub rows: Vec<SweepRow>,
    pub max_abs_mismatch: f64,
    pub crossing_analytic: f64,
    /// Zero of the numerically computed `H(A|B)`.
    pub crossing_numeric: Option<f64>,
    /// Rows where `mm ≥ md ≥ dd` (below the crossing) or its reverse (above)
    /// fails by more than the tolerance.
    pub ordering_failures: Vec<usize>,
}

impl WernerSweep {
    pub fn passed(&self) -> bool {
        self.max_abs_mismatch <= ANALYTIC_TOL
            && self.ordering_failures.is_empty()
            && self.crossing_numeric.is_some()
    }

    pub fn render(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    e12(r.params[0]),
                    e12(r.mm),
                    e12(r.md),
                    e12(r.dd),
                    e12(r.cond),
                ]
            })
            .collect();
        let mut out = table(&["eta", "mm", "md", "dd", "cond"], &rows, format);
        writeln!(out, "# max_abs_mismatch={}", e12(self.max_abs_mismatch)).unwrap();
        writeln!(
            out,
            "# crossing_eta_analytic={}",
            e12(self.crossing_analytic)
        )
        .unwrap();
        let numeric = self.crossing_numeric.map_or_else(|| "none".into(), e12);
        writeln!(out, "# crossing_eta_numeric={numeric}").unwrap();
        writeln!(out, "# ordering_failures={}", self.ordering_failures.len()).unwrap();
        writeln!(
            out,
            "# status={}",
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}

fn werner_numeric(eta: f64) -> Result<SweepRow> {
    let w = werner(WernerParams::new(eta)?);
    let (m1, m2) = (qubit_basis(FRAC_PI_2, 0.0), pi2_basis());
    Ok(SweepRow {
        params: [eta, 0.0],
        mm: mm_memory(&w, &m1, &m2)?.lhs,
        md: md_memory(&w, &m1, &m2)?.lhs,
        dd: dd_memory(&w, &m1, &m2)?.lhs,
        cond: conditional(&w)?,
    })
}

pub fn run_werner_sweep(eta_steps: usize, exec: Execution) -> Result<WernerSweep> {
    check_steps("--eta-steps", eta_steps)?;
    let eta_at = grid(eta_steps, 1.0);
    let cells = map_indexed(exec, eta_steps, |i| {
        let eta = eta_at(i);
        let row = werner_numeric(eta)?;
        let analytic = [
            werner_mm(eta),
            werner_md(eta),
            werner_dd(eta),
            werner_conditional(eta),
        ];
        Ok::<_, CliError>(Cell {
            mismatch: mismatch(&row, analytic),
            row,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let crossing_analytic = werner_crossing(CROSSING_RESIDUAL);
    let crossing_numeric = bisect(
        |eta| werner_numeric(eta).map_or(f64::NAN, |r| r.cond),
        0.0,
        1.0,
        CROSSING_RESIDUAL,
    );
    let ordering_failures = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let r = &c.row;
            let descending = r.mm >= r.md - ANALYTIC_TOL && r.md >= r.dd - ANALYTIC_TOL;
            let ascending = r.mm <= r.md + ANALYTIC_TOL && r.md <= r.dd + ANALYTIC_TOL;
            if r.params[0] < crossing_analytic {
                !descending
            } else {
                !ascending
            }
        })
        .map(|(i, _)| i)
        .collect();
    Ok(WernerSweep {
        max_abs_mismatch: cells.iter().fold(0.0, |m, c| nan_max(m, c.mismatch)),
        rows: cells.into_iter().map(|c| c.row).collect(),
        crossing_analytic,
        crossing_numeric,
        ordering_failures,
    })
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[derive(Debug, Clone)]
pub struct BlochSweep {
    /// Row-major over `(r3, θ)`: `θ` varies fastest.
    pub rows: Vec<SweepRow>,
    pub max_abs_mismatch: f64,
    /// Cells where `mm ≥ md ≥ dd` fails by more than the tolerance.
    pub ordering_failures: Vec<usize>,
    /// Largest spread `mm − dd` over the pure-state (`r3 = 1`) row.
    pub pure_spread: f64,
}

impl BlochSweep {
    pub fn passed(&self) -> bool {
        self.max_abs_mismatch <= ANALYTIC_TOL
            && self.ordering_failures.is_empty()
            && self.pure_spread <= ANALYTIC_TOL
    }

    pub fn render(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    e12(r.params[0]),
                    e12(r.params[1]),
                    e12(r.mm),
                    e12(r.md),
                    e12(r.dd),
                    e12(r.cond),
                ]
            })
            .collect();
        let mut out = table(&["r3", "theta", "mm", "md", "dd", "cond"], &rows, format);
        writeln!(out, "# max_abs_mismatch={}", e12(self.max_abs_mismatch)).unwrap();
        writeln!(out, "# ordering_failures={}", self.ordering_failures.len()).unwrap();
        writeln!(out, "# pure_state_spread={}", e12(self.pure_spread)).unwrap();
        writeln!(
            out,
            "# status={}",
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}

fn bloch_numeric(r3: f64, theta: f64) -> Result<SweepRow> {
    let rho = bloch_qubit(BlochParams::new(r3)?);
    let reports = memoryless_pair(&rho, &qubit_basis(theta, 0.0), &pi2_basis())?;
    let lhs = |name: &str| {
        reports
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.lhs)
            .expect("memoryless pair report present")
    };
    Ok(SweepRow {
        params: [r3, theta],
        mm: lhs("nomem-mm"),
        md: lhs("nomem-md12"),
        dd: lhs("nomem-dd"),
        cond: von_neumann(&rho),
    })
}

pub fn run_bloch_sweep(r3_steps: usize, theta_steps: usize, exec: Execution) -> Result<BlochSweep> {
    check_steps("--r3-steps", r3_steps)?;
    check_steps("--theta-steps", theta_steps)?;
    let (r3_at, theta_at) = (grid(r3_steps, 1.0), grid(theta_steps, PI));
    let cells = map_indexed(exec, r3_steps * theta_steps, |i| {
        let (r3, theta) = (r3_at(i / theta_steps), theta_at(i % theta_steps));
        let row = bloch_numeric(r3, theta)?;
        let analytic = [
            bloch_mm(r3, theta),
            bloch_md(r3, theta),
            bloch_dd(r3, theta),
            bloch_entropy(r3),
        ];
        Ok::<_, CliError>(Cell {
            mismatch: mismatch(&row, analytic),
            row,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let ordering_failures = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let r = &c.row;
            !(r.mm >= r.md - ANALYTIC_TOL && r.md >= r.dd - ANALYTIC_TOL)
        })
        .map(|(i, _)| i)
        .collect();
    let pure_spread = cells[(r3_steps - 1) * theta_steps..]
        .iter()
        .fold(0.0, |m, c| nan_max(m, (c.row.mm - c.row.dd).abs()));
    Ok(BlochSweep {
        max_abs_mismatch: cells.iter().fold(0.0, |m, c| nan_max(m, c.mismatch)),
        rows: cells.into_iter().map(|c| c.row).collect(),
        ordering_failures,
        pure_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn werner_endpoints() {
        let s = run_werner_sweep(11, Execution::Sequential).unwrap();
        assert!(s.passed());
        let first = s.rows[0];
        assert!((first.mm - 2.0).abs() <= 1e-10);
        assert!(first.dd.abs() <= 1e-10);
        assert!((first.cond - 1.0).abs() <= 1e-10);
        let last = s.rows[10];
        assert_eq!(last.params[0], 1.0);
        assert!(last.mm.abs() <= 1e-10);
        assert!((last.cond + 1.0).abs() <= 1e-10);
        let numeric = s.crossing_numeric.unwrap();
        assert!((numeric - s.crossing_analytic).abs() <= 1e-8);
    }

    #[test]
    fn werner_render_has_footers() {
        let text = run_werner_sweep(3, Execution::Sequential)
            .unwrap()
            .render(Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "eta,mm,md,dd,cond");
        assert!(lines[1].starts_with("0.000000000000e+00,2.000000000000e+00,"));
        assert!(lines[3].starts_with("1.000000000000e+00,"));
        assert!(text.contains("# crossing_eta_analytic=7.47"));
        assert!(text.ends_with("# status=pass\n"));
    }

    #[test]
    fn bloch_cells() {
        let s = run_bloch_sweep(6, 5, Execution::Sequential).unwrap();
        assert!(s.passed(), "{}", s.render(Format::Text));
        // r3 = 0: both distributions uniform, no disturbance
        let mixed = s.rows[0];
        assert!((mixed.mm - 2.0).abs() <= 1e-10);
        assert!(mixed.dd.abs() <= 1e-10);
        // r3 = 0.6, θ = 0 contributes shannon(0.8, 0.2) from the first basis
        let row = bloch_numeric(0.6, 0.0).unwrap();
        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert!((row.mm - h(0.8) - h(0.65)).abs() <= 1e-10);
        assert!((h(0.8) - 0.721928).abs() <= 1e-6);
        let pure = s.rows[5 * 5 + 2];
        assert_eq!(pure.params, [1.0, PI / 2.0]);
        assert!((pure.mm - pure.dd).abs() <= 1e-9);
    }

    #[test]
    fn too_few_steps() {
        assert!(matches!(
            run_werner_sweep(1, Execution::Sequential),
            Err(CliError::Usage(_))
        ));
        assert!(run_bloch_sweep(2, 1, Execution::Sequential).is_err());
    }
}
