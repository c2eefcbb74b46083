//! Text renderings of a [`ConvergenceReport`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{ConvergenceReport, ConvergenceRow, OutputFormat};
use crate::error::{LdgError, Result};
use crate::error_analysis::loglog_slope;
use crate::mesh::MeshKind;

pub const CSV_HEADER: &str =
    "mesh,k,epsilon,N,energy_error,energy_rate_r2,energy_rate_rs,l2u_error,l2u_rate,l2p_error,l2p_rate";

const FAILED: &str = "ERR";

/// Three significant digits and a signed two-digit exponent: `3.01e-03`.
pub fn format_error(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Two decimals, or an empty cell.
pub fn format_rate(r: Option<f64>) -> String {
    r.map(|r| format!("{r:.2}")).unwrap_or_default()
}

fn format_eps(eps: f64) -> String {
    format!("{eps:e}")
}

fn csv_line(row: &ConvergenceRow) -> String {
    let head = format!("{},{},{},{}", row.kind.label(), row.k, format_eps(row.eps), row.n);
    match row.metrics() {
        Some(m) => format!(
            "{head},{},{},{},{},{},{},{}",
            format_error(m.energy),
            format_rate(row.rates.energy_r2),
            format_rate(row.rates.energy_rs),
            format_error(m.l2_u),
            format_rate(row.rates.l2u),
            format_error(m.l2_p),
            format_rate(row.rates.l2p),
        ),
        None => format!("{head},{FAILED},,,{FAILED},,{FAILED},"),
    }
}

fn emit_csv(report: &ConvergenceReport) -> String {
    let mut out = String::with_capacity(80 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&csv_line(row));
        out.push('\n');
    }
    out
}

fn ordered_unique<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    out
}

/// One table per (eps, k): N down the side, each mesh kind's error and
/// rates across.
fn emit_markdown(report: &ConvergenceReport) -> String {
    let rows = &report.rows;
    let eps_list = ordered_unique(rows.iter().map(|r| r.eps));
    let degrees = {
        let mut d = ordered_unique(rows.iter().map(|r| r.k));
        d.sort_unstable();
        d
    };
    let kinds = ordered_unique(rows.iter().map(|r| r.kind));
    let ns = {
        let mut n = ordered_unique(rows.iter().map(|r| r.n));
        n.sort_unstable();
        n
    };
    let cell = |row: Option<&ConvergenceRow>, f: &dyn Fn(&ConvergenceRow) -> String| match row {
        Some(r) if r.failed() => FAILED.to_string(),
        Some(r) => f(r),
        None => String::new(),
    };

    let mut out = String::new();
    for &eps in &eps_list {
        let _ = writeln!(out, "## epsilon = {}\n", format_eps(eps));
        for &k in &degrees {
            let _ = writeln!(out, "### P{k}, energy error\n");
            let mut header = String::from("| N |");
            let mut rule = String::from("|---:|");
            for &kind in &kinds {
                let _ = write!(header, " {} | r2 |", kind.label());
                rule.push_str("---:|---:|");
                if kind == MeshKind::Shishkin {
                    header.push_str(" rs |");
                    rule.push_str("---:|");
                }
            }
            let _ = writeln!(out, "{header}\n{rule}");
            for &n in &ns {
                let mut line = format!("| {n} |");
                for &kind in &kinds {
                    let r = report.find(kind, k, eps, n);
                    let e = cell(r, &|r| format_error(r.metrics().unwrap().energy));
                    let _ = write!(line, " {e} | {} |", cell(r, &|r| format_rate(r.rates.energy_r2)));
                    if kind == MeshKind::Shishkin {
                        let _ = write!(line, " {} |", cell(r, &|r| format_rate(r.rates.energy_rs)));
                    }
                }
                let _ = writeln!(out, "{line}");
            }

            let _ = writeln!(out, "\n### P{k}, L2 errors of u and p\n");
            let mut header = String::from("| N |");
            let mut rule = String::from("|---:|");
            for &kind in &kinds {
                let l = kind.label();
                let _ = write!(header, " {l} u | rate | {l} p | rate |");
                rule.push_str("---:|---:|---:|---:|");
            }
            let _ = writeln!(out, "{header}\n{rule}");
            for &n in &ns {
                let mut line = format!("| {n} |");
                for &kind in &kinds {
                    let r = report.find(kind, k, eps, n);
                    let _ = write!(
                        line,
                        " {} | {} | {} | {} |",
                        cell(r, &|r| format_error(r.metrics().unwrap().l2_u)),
                        cell(r, &|r| format_rate(r.rates.l2u)),
                        cell(r, &|r| format_error(r.metrics().unwrap().l2_p)),
                        cell(r, &|r| format_rate(r.rates.l2p)),
                    );
                }
                let _ = writeln!(out, "{line}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn emit_table(report: &ConvergenceReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => emit_csv(report),
        OutputFormat::Markdown => emit_markdown(report),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotQuantity {
    Energy,
    L2U,
    L2P,
}

impl PlotQuantity {
    pub const ALL: [PlotQuantity; 3] = [PlotQuantity::Energy, PlotQuantity::L2U, PlotQuantity::L2P];

    pub fn name(self) -> &'static str {
        match self {
            PlotQuantity::Energy => "energy",
            PlotQuantity::L2U => "l2u",
            PlotQuantity::L2P => "l2p",
        }
    }

    /// Exponent of the reference slope `N^-(k + offset)`.
    pub fn reference_offset(self) -> f64 {
        match self {
            PlotQuantity::Energy => 0.5,
            PlotQuantity::L2U | PlotQuantity::L2P => 1.0,
        }
    }

    fn value(self, row: &ConvergenceRow) -> Option<f64> {
        let m = row.metrics()?;
        Some(match self {
            PlotQuantity::Energy => m.energy,
            PlotQuantity::L2U => m.l2_u,
            PlotQuantity::L2P => m.l2_p,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotFile {
    pub name: String,
    pub contents: String,
    /// Least-squares log-log slopes of the measured and reference columns.
    pub measured_slope: f64,
    pub reference_slope: f64,
}

/// One file per (quantity, kind, k, eps) with columns `N error reference`,
/// the reference `N^-(k + 1/2)` (energy) or `N^-(k + 1)` (L2) scaled to
/// match the first measured point. Failed rows are left out.
pub fn plotdata_files(report: &ConvergenceReport) -> Vec<PlotFile> {
    let mut files = Vec::new();
    for sweep in report.sweeps() {
        let first = &sweep[0];
        for q in PlotQuantity::ALL {
            let points: Vec<(usize, f64)> = sweep.iter().filter_map(|r| Some((r.n, q.value(r)?))).collect();
            let Some(&(n0, e0)) = points.first() else {
                continue;
            };
            let p = first.k as f64 + q.reference_offset();
            let reference: Vec<f64> = points.iter().map(|&(n, _)| e0 * (n0 as f64 / n as f64).powf(p)).collect();
            let mut contents = format!(
                "# mesh={} k={} epsilon={} quantity={} columns: N error reference(N^-{p})\n",
                first.kind.label(),
                first.k,
                format_eps(first.eps),
                q.name()
            );
            for (&(n, e), r) in points.iter().zip(&reference) {
                let _ = writeln!(contents, "{n} {e:.6e} {r:.6e}");
            }
            let ns: Vec<usize> = points.iter().map(|p| p.0).collect();
            let errs: Vec<f64> = points.iter().map(|p| p.1).collect();
            files.push(PlotFile {
                name: format!("{}_{}_k{}_eps{}.dat", q.name(), first.kind.label(), first.k, format_eps(first.eps)),
                contents,
                measured_slope: if ns.len() > 1 { loglog_slope(&ns, &errs) } else { f64::NAN },
                reference_slope: -p,
            });
        }
    }
    files
}

/// Writes [`plotdata_files`] into `dir`, creating it if needed.
pub fn write_plotdata(report: &ConvergenceReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |path: &Path, e: std::io::Error| LdgError::Io { path: path.display().to_string(), message: e.to_string() };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    for file in plotdata_files(report) {
        let path = dir.join(&file.name);
        std::fs::write(&path, &file.contents).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
