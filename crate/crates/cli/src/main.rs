//! `dsrange`: matrices, numerical ranges, Berezin samples and the
//! verification report for weighted composition operators on `D_s`.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dsrange::berezin::berezin_grid;
use dsrange::numrange::{boundary_sweep, contains_point, DEFAULT_MARGIN};
use dsrange::operator::build_matrix;
use dsrange::verify::run_all;
use dsrange::{Complex64, OperatorSpec};

use config::{parse_grid, parse_suites, RunConfig};
use output::{berezin_csv, boundary_csv, hull_csv, show, show_complex, write_atomic};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] dsrange::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dsrange", version, about = "Numerical and Berezin ranges of weighted composition operators on D_s")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration file (key = value lines with [sections])
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Number of rotation-sweep angles
    #[arg(long, global = true, value_name = "M")]
    angles: Option<usize>,
    /// Berezin grid resolution as radial,angular
    #[arg(long, global = true, value_name = "R,K")]
    grid: Option<String>,
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Verification suite to run; repeatable or comma-separated
    #[arg(long, global = true, value_name = "NAME")]
    suite: Vec<String>,
    /// Accept a series symbol phi whose self-map bound is only attested
    #[arg(long, global = true)]
    allow_unverified_selfmap: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the truncated operator matrix as JSON
    Matrix,
    /// Write the numerical-range boundary and hull as CSV
    Numrange,
    /// Write the sampled Berezin transform as CSV
    Berezin,
    /// Run the verification suites and write the JSON report
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(m) = cli.angles {
        cfg.angles = m;
    }
    if let Some(grid) = &cli.grid {
        (cfg.grid_radial, cfg.grid_angular) = parse_grid(grid)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if !cli.suite.is_empty() {
        cfg.suites = cli.suite.iter().map(|s| parse_suites(s)).collect::<Result<Vec<_>, _>>()?.concat();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn operator_spec(cli: &Cli, cfg: &RunConfig) -> Result<OperatorSpec, CliError> {
    if cfg.phi.is_general_series() && !cli.allow_unverified_selfmap {
        return Err(CliError::Invalid(
            "phi is a series symbol; pass --allow-unverified-selfmap to accept its self-map bound".into(),
        ));
    }
    Ok(OperatorSpec::new(cfg.psi.clone(), cfg.phi.clone(), cfg.space(), cfg.order)?)
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, CliError> {
    write_atomic(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let cfg = load_config(cli)?;
    match cli.command {
        Command::Matrix => {
            let matrix = build_matrix(&operator_spec(cli, &cfg)?)?;
            let json = serde_json::to_string_pretty(&matrix.dump()).expect("matrix dump serializes");
            let path = write(cfg.out_dir.join(&cfg.matrix_file), &json)?;
            println!("matrix: {} x {}", matrix.dim(), matrix.dim());
            println!("wrote {}", path.display());
        }
        Command::Numrange => {
            let matrix = build_matrix(&operator_spec(cli, &cfg)?)?;
            let curve = boundary_sweep(&matrix.entries, cfg.angles)?;
            let boundary = write(cfg.out_dir.join(&cfg.boundary_file), &boundary_csv(&curve))?;
            let hull = write(cfg.out_dir.join(&cfg.hull_file), &hull_csv(&curve))?;
            let zero = contains_point(&curve, Complex64::new(0.0, 0.0), DEFAULT_MARGIN);
            println!("numerical radius: {}", show(curve.max_modulus()));
            println!("hull shape: {:?}", curve.shape);
            println!("0 interior: {} (depth {})", zero.inside, show(zero.depth));
            println!("wrote {}", boundary.display());
            println!("wrote {}", hull.display());
        }
        Command::Berezin => {
            let sample = berezin_grid(&operator_spec(cli, &cfg)?, cfg.grid_radial, cfg.grid_angular)?;
            let path = write(cfg.out_dir.join(&cfg.berezin_file), &berezin_csv(&sample))?;
            println!("Berezin radius estimate: {}", show(sample.radius_estimate));
            println!("maximizer: {}", show_complex(sample.maximizer));
            println!("wrote {}", path.display());
        }
        Command::Verify => {
            let report = run_all(&cfg.verify_config())?;
            let path = write(cfg.out_dir.join(&cfg.report_file), &report.to_json())?;
            let s = &report.summary;
            println!(
                "pass: {}, fail: {}, informational: {}, external-lemma: {}",
                s.pass, s.fail, s.informational, s.external
            );
            for c in report.checks.iter().filter(|c| c.status == dsrange::verify::Status::Fail) {
                println!("FAIL {} {}", c.id, c.params);
            }
            println!("wrote {}", path.display());
            if report.has_failures() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}
