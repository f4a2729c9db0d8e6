//! Command-line front end for the benchmark harness.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchmarkCase, CaseConfig, CaseId};
use crate::bkm;
use crate::error::{Error, Result};
use crate::geometry::Placement;
use crate::kernels::KernelVariant;
use crate::rbf;
use crate::structmat::{classify_structure, DenseMatrix, Lu};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// Largest knot counts accepted on the command line.
pub const MAX_BOUNDARY: usize = 200;
pub const MAX_INTERIOR: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "knotmesh", version, about = "Boundary knot method benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a benchmark case and print its error table.
    Run(RunArgs),
    /// Run a case over several boundary-knot counts and fit the error decay.
    Study(StudyArgs),
    /// Print structure and conditioning of a case's matrices.
    Inspect(InspectArgs),
    /// List the registered cases.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlacementArg {
    Uniform,
    Chebyshev,
}

impl From<PlacementArg> for Placement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::Uniform => Placement::UniformParameter,
            PlacementArg::Chebyshev => Placement::ChebyshevParameter,
        }
    }
}

#[derive(Debug, Args)]
struct CaseArgs {
    /// Case name (see `list`).
    case: String,
    /// Boundary knot count.
    #[arg(long)]
    boundary: Option<usize>,
    /// Interior knot count.
    #[arg(long)]
    interior: Option<usize>,
    /// MQ shape parameter.
    #[arg(long = "shape-c")]
    shape_c: Option<f64>,
    #[arg(long, value_enum, default_value = "uniform")]
    placement: PlacementArg,
    /// Use the printed frozen-velocity kernel instead of the derived one.
    #[arg(long = "paper-literal-kernel")]
    paper_literal_kernel: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Write the knot table to this file.
    #[arg(long = "dump-knots")]
    dump_knots: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Comma-separated boundary knot counts.
    #[arg(long = "n-list", value_delimiter = ',', default_value = "3,5,7,9")]
    n_list: Vec<usize>,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[command(flatten)]
    case: CaseArgs,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseId,
    pub config: CaseConfig,
    pub format: Format,
    pub dump_knots: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl CaseArgs {
    fn resolve(&self) -> Result<(BenchmarkCase, CaseConfig)> {
        let bc = bench::lookup(&self.case)?;
        let d = bc.default_config();
        let cfg = CaseConfig {
            boundary: self.boundary.unwrap_or(d.boundary),
            interior: self.interior.unwrap_or(d.interior),
            shape_c: self.shape_c.unwrap_or(d.shape_c),
            placement: self.placement.into(),
            variant: if self.paper_literal_kernel {
                KernelVariant::Literal
            } else {
                KernelVariant::Derived
            },
        };
        if !(3..=MAX_BOUNDARY).contains(&cfg.boundary) {
            return Err(Error::Config(format!(
                "--boundary must lie in 3..={MAX_BOUNDARY}, got {}",
                cfg.boundary
            )));
        }
        if cfg.interior > MAX_INTERIOR {
            return Err(Error::Config(format!(
                "--interior must be at most {MAX_INTERIOR}, got {}",
                cfg.interior
            )));
        }
        if !(cfg.shape_c.is_finite() && cfg.shape_c > 0.0) {
            return Err(Error::Config(format!("--shape-c must be positive, got {}", cfg.shape_c)));
        }
        if self.paper_literal_kernel && bc.id != CaseId::Burger {
            return Err(Error::Config("--paper-literal-kernel applies to the burger case only".into()));
        }
        Ok((bc, cfg))
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        match e {
            Error::Case { source, .. } => exit_code(source),
            Error::Config(_) | Error::Unsupported(_) | Error::Domain(_) => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        }
    }
}

/// Runs the CLI with the given arguments (including the program name) and
/// returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("i/o: {e}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::List => {
            for id in CaseId::ALL {
                let d = bench::case(id).default_config();
                writeln!(
                    out,
                    "{:<18} N={:<3} L={:<3} c={:<5} {}",
                    id.name(),
                    d.boundary,
                    d.interior,
                    d.shape_c,
                    id.equation()
                )
                .map_err(io_err)?;
            }
            Ok(())
        }
        Command::Run(a) => {
            let (bc, config) = a.case.resolve()?;
            let rc = RunConfig {
                case: bc.id,
                config,
                format: a.format,
                dump_knots: a.dump_knots,
                output: a.output,
            };
            run(&rc, out, err)
        }
        Command::Study(a) => {
            let (bc, cfg) = a.case.resolve()?;
            if let Some(n) = a.n_list.iter().find(|n| !(3..=MAX_BOUNDARY).contains(*n)) {
                return Err(Error::Config(format!("--n-list entries must lie in 3..={MAX_BOUNDARY}, got {n}")));
            }
            let report = bench::convergence_study(&bc, &a.n_list, &cfg)?;
            out.write_all(report.to_table().as_bytes()).map_err(io_err)
        }
        Command::Inspect(a) => {
            let (bc, cfg) = a.case.resolve()?;
            inspect(&bc, &cfg, out)
        }
    }
}

pub fn run(rc: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let bc = bench::case(rc.case);
    if let Some(path) = &rc.dump_knots {
        let spec = bc.spec(&rc.config)?;
        fs::write(path, spec.knots.to_table()).map_err(io_err)?;
    }
    let report = bench::run_case(&bc, &rc.config)?;
    let text = match rc.format {
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    };
    match &rc.output {
        Some(path) => fs::write(path, text).map_err(io_err)?,
        None => out.write_all(text.as_bytes()).map_err(io_err)?,
    }
    writeln!(err, "wall time: {:.3} ms", report.wall_time.as_secs_f64() * 1e3).map_err(io_err)
}

fn describe(out: &mut dyn Write, label: &str, m: &DenseMatrix) -> Result<()> {
    let cond = match Lu::factor(m) {
        Ok(lu) => format!("{:.3e}", lu.condition_estimate()?),
        Err(_) => "inf (singular)".to_string(),
    };
    writeln!(
        out,
        "{label}: {}x{}, {}, symmetric: {}, condition estimate {cond}",
        m.rows(),
        m.cols(),
        classify_structure(m),
        m.is_symmetric(1e-12 * m.max_abs().max(1.0))
    )
    .map_err(io_err)
}

/// Reports structure of the collocation and interpolation matrices with the
/// boundary knots in antipodal order when the count is even.
fn inspect(bc: &BenchmarkCase, cfg: &CaseConfig, out: &mut dyn Write) -> Result<()> {
    let mut spec = bc.spec(cfg)?;
    let ordering = match spec.knots.clone().with_antipodal_order() {
        Ok(k) => {
            spec.knots = k;
            "antipodal"
        }
        Err(_) => "angular",
    };
    writeln!(
        out,
        "case {}: {} boundary + {} interior knots, {ordering} order",
        bc.name(),
        spec.knots.n_boundary(),
        spec.knots.n_interior()
    )
    .map_err(io_err)?;
    describe(out, "collocation matrix", &bkm::collocation_matrix(&spec)?)?;
    if bc.uses_shape_parameter() {
        let a = rbf::interpolation_matrix(&spec.knots.all_points(), &spec.drm.kernel)?;
        describe(out, &format!("interpolation matrix (MQ c={})", cfg.shape_c), &a)?;
    }
    Ok(())
}
