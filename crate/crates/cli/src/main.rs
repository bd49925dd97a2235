//! `loewner`: value regions, Loewner trajectories and Monte-Carlo checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loewner_core::chordal::{integrate_chordal, line_driver, HalfPlanePoint, RealDriver};
use loewner_core::driver::PiecewiseDriver;
use loewner_core::ensemble::{EnsembleConfig, Execution, DEFAULT_MEAN_SPACING};
use loewner_core::io::{
    fmt_f64, region_svg, write_chordal_csv, write_radial_csv, write_region_csv, CsvError,
};
use loewner_core::radial::{integrate, optimal_driver, t_max, CircleDriver, DEFAULT_STEP};
use loewner_core::spirals::{arc_length_closed_form, DEFAULT_ARC_SAMPLES};
use loewner_core::value_region::{grunsky_disk, RegionSpec};
use loewner_core::verify::{self, Mode};
use loewner_core::{DiskPoint, Error, Sign};
use num_complex::Complex64;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "loewner",
    version,
    about = "Value regions and Loewner trajectories for bounded univalent maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary of the value region of z0 as CSV or SVG, plus a summary.
    Region(RegionArgs),
    /// Integrate a single Loewner trajectory and write its trace as CSV.
    Trajectory(TrajectoryArgs),
    /// Seeded random-driver ensemble check; exit 1 on any violation.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Disk,
    Halfplane,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Disk => Mode::Disk,
            ModeArg::Halfplane => Mode::HalfPlane,
        }
    }
}

#[derive(Args)]
struct RegionArgs {
    /// Anchor point, e.g. "0.5+0.4i".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z0: Complex64,
    /// Samples per boundary arc.
    #[arg(long, default_value_t = DEFAULT_ARC_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; data goes to stdout and the summary to stderr if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    /// Starting point: in the unit disk, or in the upper half-plane for
    /// `--mode halfplane`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z0: Complex64,
    #[arg(long, value_enum, default_value = "disk")]
    mode: ModeArg,
    /// `optimal` (disk), `line` (halfplane) or a driver file path.
    #[arg(long)]
    driver: Option<String>,
    /// Optimal control branch.
    #[arg(long, default_value = "plus")]
    sign: Sign,
    /// Target point for the halfplane `line` driver.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    target: Option<Complex64>,
    /// Time horizon; the `line` driver defaults to its hitting time.
    #[arg(long = "T")]
    horizon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "disk")]
    mode: ModeArg,
    /// Defaults to 0.5+0.4i (disk) or i (halfplane).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z0: Option<Complex64>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "T", default_value_t = 3.0)]
    horizon: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Run trials on one thread; the report is identical either way.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        match e {
            CsvError::Io(e) => CliError::Io(e.to_string()),
            CsvError::Domain(e) => e.into(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `a+bi`, `a-bi`, `bi`, `i` or `a`, ignoring whitespace.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let z: Complex64 = compact
        .parse()
        .map_err(|_| format!("not a complex number: '{s}'"))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite complex number: '{s}'"))
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let result = match path {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    };
    result.map_err(CliError::Io)
}

fn region_summary(spec: &RegionSpec) -> CliResult<String> {
    let z0 = spec.z0();
    let mut s = String::new();
    let _ = writeln!(s, "z0: {} {}", fmt_f64(z0.re()), fmt_f64(z0.im()));
    let _ = writeln!(s, "degenerate: {}", spec.is_degenerate());
    let _ = writeln!(s, "is_convex: {}", spec.is_convex());
    let _ = writeln!(s, "origin_isolated: {}", spec.origin_isolated());
    if spec.is_degenerate() {
        let _ = writeln!(s, "region: {{0}}");
        let _ = writeln!(s, "arc_length_plus: {}", fmt_f64(0.0));
        let _ = writeln!(s, "arc_length_minus: {}", fmt_f64(0.0));
        let _ = writeln!(s, "t_max: inf");
        return Ok(s);
    }
    let (plus, minus) = spec.arc_lengths().expect("non-degenerate region has arcs");
    let _ = writeln!(s, "rho0: {}", fmt_f64(spec.rho0()));
    let _ = writeln!(s, "phi0: {}", fmt_f64(spec.phi0()));
    let _ = writeln!(s, "arc_length_plus: {}", fmt_f64(plus));
    let _ = writeln!(s, "arc_length_minus: {}", fmt_f64(minus));
    let _ = writeln!(
        s,
        "arc_length_closed_form: {}",
        fmt_f64(arc_length_closed_form(spec.rho0()))
    );
    let tm = t_max(z0)?;
    let _ = writeln!(
        s,
        "t_max: {}",
        if tm.is_finite() {
            fmt_f64(tm)
        } else {
            "inf".into()
        }
    );
    let (center, radius) = grunsky_disk(z0)?;
    let _ = writeln!(
        s,
        "grunsky_center: {} {}",
        fmt_f64(center.re),
        fmt_f64(center.im)
    );
    let _ = writeln!(s, "grunsky_radius: {}", fmt_f64(radius));
    Ok(s)
}

fn cmd_region(a: &RegionArgs) -> CliResult<u8> {
    let z0 = DiskPoint::from_complex(a.z0)?;
    if a.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let spec = RegionSpec::new(z0);
    let data = match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_region_csv(&mut buf, &spec.boundary_vertices(a.samples)?)
                .map_err(|e| CliError::Io(e.to_string()))?;
            buf
        }
        Format::Svg => region_svg(&spec, a.samples)?.into_bytes(),
    };
    let summary = region_summary(&spec)?;
    write_output(a.out.as_deref(), &data)?;
    if a.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(0)
}

fn load_driver(path: &str) -> CliResult<PiecewiseDriver> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    Ok(PiecewiseDriver::parse(&text)?)
}

fn checked_step(step: f64) -> CliResult<f64> {
    if step.is_finite() && step > 0.0 {
        Ok(step)
    } else {
        Err(CliError::Usage("--step must be positive".into()))
    }
}

fn cmd_trajectory(a: &TrajectoryArgs) -> CliResult<u8> {
    let step = checked_step(a.step)?;
    let mut buf = Vec::new();
    match a.mode {
        ModeArg::Disk => {
            let z0 = DiskPoint::from_complex(a.z0)?;
            let driver = match a.driver.as_deref().unwrap_or("optimal") {
                "optimal" => optimal_driver(z0, a.sign)?,
                path => CircleDriver::Piecewise(load_driver(path)?),
            };
            let trace = integrate(z0, &driver, a.horizon.unwrap_or(5.0), step)?;
            write_radial_csv(&mut buf, &trace, &driver)?;
        }
        ModeArg::Halfplane => {
            let z0 = HalfPlanePoint::from_complex(a.z0)?;
            let (driver, horizon) = match a.driver.as_deref() {
                Some("line") | None => {
                    let target = a
                        .target
                        .ok_or_else(|| CliError::Usage("the line driver needs --target".into()))?;
                    let (driver, t_hit) = line_driver(z0, HalfPlanePoint::from_complex(target)?)?;
                    (driver, a.horizon.unwrap_or(t_hit))
                }
                Some(path) => (
                    RealDriver::Piecewise(load_driver(path)?),
                    a.horizon.unwrap_or(5.0),
                ),
            };
            let trace = integrate_chordal(z0, &driver, horizon, step)?;
            write_chordal_csv(&mut buf, &trace, &driver)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    write_output(a.out.as_deref(), &buf)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<u8> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mode = Mode::from(a.mode);
    let z0 = a.z0.unwrap_or(match mode {
        Mode::Disk => Complex64::new(0.5, 0.4),
        Mode::HalfPlane => Complex64::new(0.0, 1.0),
    });
    let cfg = verify::VerifyConfig {
        mode,
        z0,
        ensemble: EnsembleConfig {
            trials: a.trials,
            seed: a.seed,
            horizon: a.horizon,
            step: checked_step(a.step)?,
            tolerance: a.tol,
            mean_spacing: DEFAULT_MEAN_SPACING,
        },
        exec: if a.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let report = verify::run(&cfg)?;
    let text = report.to_string();
    if let Some(path) = &a.out {
        write_output(Some(path), text.as_bytes())?;
    }
    print!("{text}");
    Ok(if report.passed() { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Region(a) => cmd_region(a),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
