//! Convergence-study driver: sweeps (mesh kind, degree, eps, N) over the
//! layer test problem and collects errors and rates.

mod config;
mod emit;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use config::{doubling_sequence, parse_degrees, parse_eps_list, parse_kinds, parse_settings, ConfigBuilder};
pub use emit::{
    emit_table, format_error, format_rate, plotdata_files, write_plotdata, PlotFile, PlotQuantity, CSV_HEADER,
};

use crate::error::{LdgError, Result};
use crate::error_analysis::error_record;
use crate::ldg::solve_problem;
use crate::manufactured::layer_case;
use crate::mesh::{Mesh, MeshKind, MeshSpec};
use crate::poly::{gauss_quadrature, MAX_POINTS};

/// Highest polynomial degree the study accepts.
pub const MAX_DEGREE: usize = 3;

/// Relative change of the errors allowed when the error quadrature is doubled.
pub const QUAD_CHECK_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    /// `sigma = k + 1.5`
    Auto,
    Fixed(f64),
}

impl SigmaRule {
    pub fn resolve(self, k: usize) -> f64 {
        match self {
            SigmaRule::Auto => k as f64 + 1.5,
            SigmaRule::Fixed(s) => s,
        }
    }
}

impl FromStr for SigmaRule {
    type Err = LdgError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") || s == "k+1.5" {
            return Ok(SigmaRule::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(SigmaRule::Fixed(v)),
            _ => Err(LdgError::InvalidArgument(format!("sigma must be 'auto' or a positive number, got '{s}'"))),
        }
    }
}

impl fmt::Display for SigmaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaRule::Auto => f.write_str("k+1.5"),
            SigmaRule::Fixed(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = LdgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(LdgError::InvalidArgument(format!("unknown format '{other}' (csv, markdown)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub mesh_kinds: Vec<MeshKind>,
    pub degrees: Vec<usize>,
    pub eps_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub sigma: SigmaRule,
    /// Assembly quadrature size; `None` means `k + 3`.
    pub quad_assembly: Option<usize>,
    pub quad_error: usize,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    pub format: OutputFormat,
    pub output_path: Option<PathBuf>,
    /// Directory for plot-data files, if wanted.
    pub plot_dir: Option<PathBuf>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            mesh_kinds: MeshKind::ALL.to_vec(),
            degrees: (0..=MAX_DEGREE).collect(),
            eps_list: vec![1e-4, 1e-8, 1e-12],
            n_list: doubling_sequence(16, 512).expect("default N range"),
            sigma: SigmaRule::Auto,
            quad_assembly: None,
            quad_error: 20,
            workers: 0,
            format: OutputFormat::Csv,
            output_path: None,
            plot_dir: None,
        }
    }
}

impl StudyConfig {
    pub fn quad_assembly_for(&self, k: usize) -> usize {
        self.quad_assembly.unwrap_or(k + 3)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LdgError::InvalidArgument(m));
        if let Some(&k) = self.degrees.iter().find(|&&k| k > MAX_DEGREE) {
            return bad(format!("degree {k} outside 0..={MAX_DEGREE}"));
        }
        if let Some(&e) = self.eps_list.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return bad(format!("eps = {e} outside (0, 1)"));
        }
        for w in self.n_list.windows(2) {
            if w[1] != 2 * w[0] {
                return bad(format!("N list must double, got {} then {}", w[0], w[1]));
            }
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 4 || n % 2 != 0) {
            return bad(format!("N = {n} must be even and at least 4"));
        }
        if self.quad_error == 0 || 2 * self.quad_error > MAX_POINTS {
            return bad(format!("error quadrature must lie in 1..={}", MAX_POINTS / 2));
        }
        if let SigmaRule::Fixed(s) = self.sigma {
            if !(s > 0.0) {
                return bad(format!("sigma = {s} must be positive"));
            }
        }
        Ok(())
    }
}

/// Errors of one successful run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowMetrics {
    pub energy: f64,
    pub l2_u: f64,
    pub l2_p: f64,
    /// Largest relative change of the three errors when the error
    /// quadrature is doubled.
    pub quad_check: f64,
    pub growth_factor: f64,
    pub backward_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RowRates {
    pub energy_r2: Option<f64>,
    /// Shishkin meshes only.
    pub energy_rs: Option<f64>,
    pub l2u: Option<f64>,
    pub l2p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub kind: MeshKind,
    pub k: usize,
    pub eps: f64,
    pub n: usize,
    pub sigma: f64,
    /// Transition point was capped at 1/2 (mesh is not layer-adapted).
    pub clamped: bool,
    pub wall_time: Duration,
    pub outcome: std::result::Result<RowMetrics, String>,
    /// Rates from the previous N of the same sweep to this one.
    pub rates: RowRates,
}

impl ConvergenceRow {
    pub fn failed(&self) -> bool {
        self.outcome.is_err()
    }

    pub fn metrics(&self) -> Option<&RowMetrics> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMetadata {
    pub sigma: SigmaRule,
    pub quad_assembly: Option<usize>,
    pub quad_error: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub metadata: ReportMetadata,
}

impl ConvergenceReport {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(ConvergenceRow::failed)
    }

    /// Consecutive runs sharing (kind, k, eps), N ascending.
    pub fn sweeps(&self) -> impl Iterator<Item = &[ConvergenceRow]> {
        self.rows.chunk_by(|a, b| a.kind == b.kind && a.k == b.k && a.eps == b.eps)
    }

    pub fn find(&self, kind: MeshKind, k: usize, eps: f64, n: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.kind == kind && r.k == k && r.eps == eps && r.n == n)
    }

    /// Rows whose quadrature self-check exceeded [`QUAD_CHECK_TOLERANCE`].
    pub fn quad_check_failures(&self) -> Vec<&ConvergenceRow> {
        self.rows.iter().filter(|r| r.metrics().is_some_and(|m| m.quad_check > QUAD_CHECK_TOLERANCE)).collect()
    }
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn compute_row(config: &StudyConfig, kind: MeshKind, k: usize, eps: f64, n: usize) -> ConvergenceRow {
    let start = Instant::now();
    let sigma = config.sigma.resolve(k);
    let mut clamped = false;
    let outcome = (|| -> Result<RowMetrics> {
        let case = layer_case(eps);
        let spec = MeshSpec::new(kind, n, eps, sigma, case.problem.alpha)?;
        let mesh = Arc::new(Mesh::build(&spec)?);
        clamped = mesh.clamped();
        let quad_a = gauss_quadrature(config.quad_assembly_for(k))?;
        let sol = solve_problem(&case.problem, &mesh, k, &quad_a)?;
        let rec = error_record(&case, &sol, &gauss_quadrature(config.quad_error)?);
        let fine = error_record(&case, &sol, &gauss_quadrature(2 * config.quad_error)?);
        let quad_check = relative_change(rec.energy, fine.energy)
            .max(relative_change(rec.l2_u, fine.l2_u))
            .max(relative_change(rec.l2_p, fine.l2_p));
        Ok(RowMetrics {
            energy: rec.energy,
            l2_u: rec.l2_u,
            l2_p: rec.l2_p,
            quad_check,
            growth_factor: sol.info.growth_factor,
            backward_error: sol.info.backward_error,
        })
    })();
    ConvergenceRow {
        kind,
        k,
        eps,
        n,
        sigma,
        clamped,
        wall_time: start.elapsed(),
        outcome: outcome.map_err(|e| e.to_string()),
        rates: RowRates::default(),
    }
}

fn pair_rate(prev: f64, cur: f64) -> Option<f64> {
    crate::error_analysis::rate_r2(prev, cur).ok()
}

fn fill_rates(rows: &mut [ConvergenceRow]) {
    for i in 1..rows.len() {
        let (head, tail) = rows.split_at_mut(i);
        let (prev, row) = (&head[i - 1], &mut tail[0]);
        let same_sweep = prev.kind == row.kind && prev.k == row.k && prev.eps == row.eps && 2 * prev.n == row.n;
        let (Some(a), Some(b), true) = (prev.metrics(), row.metrics(), same_sweep) else {
            continue;
        };
        row.rates = RowRates {
            energy_r2: pair_rate(a.energy, b.energy),
            energy_rs: if row.kind == MeshKind::Shishkin {
                crate::error_analysis::rate_rs(a.energy, b.energy, prev.n).ok()
            } else {
                None
            },
            l2u: pair_rate(a.l2_u, b.l2_u),
            l2p: pair_rate(a.l2_p, b.l2_p),
        };
    }
}

/// Runs every (kind, k, eps, N) combination, concurrently up to
/// `config.workers`. Row order is (kind, k, eps, N ascending) regardless of
/// completion order; per-row failures are recorded, not propagated.
pub fn run_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let start = Instant::now();
    let mut kinds = config.mesh_kinds.clone();
    kinds.sort_by_key(|k| MeshKind::ALL.iter().position(|a| a == k));
    kinds.dedup();
    let mut degrees = config.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let mut eps_list: Vec<f64> = Vec::new();
    for &e in &config.eps_list {
        if !eps_list.contains(&e) {
            eps_list.push(e);
        }
    }

    let mut jobs = Vec::new();
    for &kind in &kinds {
        for &k in &degrees {
            for &eps in &eps_list {
                for &n in &config.n_list {
                    jobs.push((kind, k, eps, n));
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| LdgError::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let mut rows: Vec<ConvergenceRow> =
        pool.install(|| jobs.par_iter().map(|&(kind, k, eps, n)| compute_row(config, kind, k, eps, n)).collect());
    fill_rates(&mut rows);

    Ok(ConvergenceReport {
        rows,
        metadata: ReportMetadata {
            sigma: config.sigma,
            quad_assembly: config.quad_assembly,
            quad_error: config.quad_error,
            wall_time: start.elapsed(),
        },
    })
}
