//! Convergence-study driver and debugging dumps.
//!
//! ```text
//! ldg-study --mesh s,bs,b --k 0..3 --eps 1e-4,1e-8,1e-12 --nmin 16 --nmax 512 --out table.csv
//! ldg-study mesh --mesh b --n 16 --eps 1e-8 --k 1
//! ldg-study matrix --mesh s --n 8 --eps 1e-4 --k 1
//! ```

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ldg_core::ldg::assemble;
use ldg_core::manufactured::layer_case;
use ldg_core::poly::gauss_quadrature;
use ldg_core::study::{emit_table, run_study, write_plotdata, ConfigBuilder, SigmaRule, QUAD_CHECK_TOLERANCE};
use ldg_core::{LdgError, Mesh, MeshKind, MeshSpec, Result};

#[derive(Parser, Debug)]
#[command(name = "ldg-study", version, about = "LDG convergence studies on layer-adapted meshes")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    study: StudyArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print mesh nodes, one per line at full precision.
    Mesh(MeshArgs),
    /// Print the assembled matrix as `row col value` lines.
    Matrix(MatrixArgs),
}

#[derive(Args, Debug, Default)]
struct StudyArgs {
    /// key=value settings file; flags given here override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// mesh kinds, e.g. s,bs,b
    #[arg(long)]
    mesh: Option<String>,
    /// degrees, a range 0..3 or a list 1,2
    #[arg(long)]
    k: Option<String>,
    /// comma-separated eps values
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    nmin: Option<String>,
    #[arg(long)]
    nmax: Option<String>,
    /// `auto` (k + 1.5) or a number
    #[arg(long)]
    sigma: Option<String>,
    /// csv or markdown
    #[arg(long)]
    format: Option<String>,
    /// output file; stdout if absent
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// directory for plot-data files
    #[arg(long, value_name = "DIR")]
    plotdata: Option<String>,
    /// assembly quadrature points, or `auto` for k + 3
    #[arg(long)]
    quad_assembly: Option<String>,
    /// error quadrature points
    #[arg(long)]
    quad_error: Option<String>,
    /// worker threads, 0 for all cores
    #[arg(long)]
    workers: Option<String>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[arg(long, default_value = "s")]
    mesh: MeshKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    /// degree used by `--sigma auto`
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "auto")]
    sigma: SigmaRule,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// print 1 - x instead of x
    #[arg(long)]
    offsets: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[command(flatten)]
    mesh: MeshArgs,
    /// assembly quadrature points; k + 3 if absent
    #[arg(long)]
    quad_assembly: Option<usize>,
    /// also write the right-hand side, one value per line
    #[arg(long, value_name = "PATH")]
    rhs: Option<PathBuf>,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| LdgError::Io { path: p.display().to_string(), message: e.to_string() })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_mesh(args: &MeshArgs) -> Result<Arc<Mesh>> {
    let spec = MeshSpec::new(args.mesh, args.n, args.eps, args.sigma.resolve(args.k), args.alpha)?;
    Ok(Arc::new(Mesh::build(&spec)?))
}

fn dump_mesh(args: &MeshArgs) -> Result<()> {
    let mesh = build_mesh(args)?;
    let text = if args.offsets { mesh.offsets().iter().map(|d| format!("{d:.17e}\n")).collect() } else { mesh.dump() };
    write_output(args.out.as_deref(), &text)
}

fn dump_matrix(args: &MatrixArgs) -> Result<()> {
    let mesh = build_mesh(&args.mesh)?;
    let k = args.mesh.k;
    let quad = gauss_quadrature(args.quad_assembly.unwrap_or(k + 3))?;
    let case = layer_case(args.mesh.eps);
    let system = assemble(&case.problem, &mesh, k, &quad)?;
    if let Some(path) = &args.rhs {
        let text: String = system.rhs.iter().map(|v| format!("{v:.17e}\n")).collect();
        write_output(Some(path), &text)?;
    }
    write_output(args.mesh.out.as_deref(), &system.dump_matrix())
}

fn study(args: &StudyArgs) -> Result<bool> {
    let mut builder = ConfigBuilder::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LdgError::Io { path: path.display().to_string(), message: e.to_string() })?;
        builder.apply_text(&text)?;
    }
    let flags = [
        ("mesh", &args.mesh),
        ("k", &args.k),
        ("eps", &args.eps),
        ("nmin", &args.nmin),
        ("nmax", &args.nmax),
        ("sigma", &args.sigma),
        ("format", &args.format),
        ("out", &args.out),
        ("plotdata", &args.plotdata),
        ("quad-assembly", &args.quad_assembly),
        ("quad-error", &args.quad_error),
        ("workers", &args.workers),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            builder.set(key, v)?;
        }
    }
    let config = builder.build()?;
    let report = run_study(&config)?;
    write_output(config.output_path.as_deref(), &emit_table(&report, config.format))?;
    if let Some(dir) = &config.plot_dir {
        write_plotdata(&report, dir)?;
    }

    let failed: Vec<_> = report.rows.iter().filter(|r| r.failed()).collect();
    for r in &failed {
        eprintln!("row {} k={} eps={:e} N={} failed: {}", r.kind, r.k, r.eps, r.n, r.outcome.as_ref().unwrap_err());
    }
    for r in report.quad_check_failures() {
        let change = r.metrics().map_or(0.0, |m| m.quad_check);
        eprintln!(
            "warning: {} k={} eps={:e} N={}: doubling the error quadrature changes errors by {:.2e} (> {QUAD_CHECK_TOLERANCE:e})",
            r.kind, r.k, r.eps, r.n, change
        );
    }
    let clamped = report.rows.iter().filter(|r| r.clamped).count();
    if clamped > 0 {
        eprintln!("note: {clamped} rows used a clamped transition point (tau = 1/2)");
    }
    eprintln!("{} rows, {} failed, {:.2} s", report.rows.len(), failed.len(), report.metadata.wall_time.as_secs_f64());
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Some(Command::Mesh(args)) => dump_mesh(args).map(|_| true),
        Some(Command::Matrix(args)) => dump_matrix(args).map(|_| true),
        None => study(&cli.study),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("ldg-study: {e}");
            ExitCode::from(2)
        }
    }
}
