//! Command-line front end. `run` parses an argument vector, executes one
//! subcommand and returns the exit code together with the text destined for
//! stdout and stderr, so tests can drive it without spawning a process.

mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;

use propertime::nist::ReportFormat;
use propertime::{load_constants, PhysicalConstants};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "propertime", version, about = "Proper-time relativistic calculations", arg_required_else_help = true)]
pub struct Cli {
    /// Constants file with `key = value` lines (alpha, mc2_ev, hbar_c_ev_nm).
    #[arg(long, global = true, value_name = "PATH")]
    pub constants: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => ReportFormat::Table,
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dirac and proper-time levels with their series expansions.
    Spectrum(SpectrumArgs),
    /// Computed levels against the NIST table.
    Compare(CompareArgs),
    /// Radial profile of the square-root kernel, or its integral identities.
    Kernel(KernelArgs),
    /// Convergence of the plane-wave lower-pair separation.
    Separate(SeparateArgs),
    /// Integrate a Coulomb orbit in proper time.
    Orbit(OrbitArgs),
    /// Randomized check of the proper-time boost group properties.
    BoostCheck(SampleArgs),
    /// Evaluate point-charge fields, or run randomized field checks.
    Fields(FieldsArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Comma-separated state labels such as 2s,3p(j=3/2).
    #[arg(long, default_value = "1s,2s,2p(j=3/2),3s,3d(j=5/2),4s,5s")]
    pub states: String,
    /// Report levels above this state instead of offsets from mc².
    #[arg(long, value_name = "STATE")]
    pub relative_to: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Level table (label,n,two_j,ell,nist_ev); the bundled table by default.
    #[arg(long, value_name = "PATH")]
    pub nist: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Particle,
    Antiparticle,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Inverse range in 1/nm; defaults to mc/ħ.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Smallest separation in nm; defaults to 0.1/μ.
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Largest separation in nm; defaults to 5/μ.
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = BranchArg::Particle)]
    pub branch: BranchArg,
    /// Check the heat-kernel and resolvent identities on a fixed grid instead.
    #[arg(long)]
    pub identities: bool,
    /// Quadrature tolerance for the identity checks.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SeparateArgs {
    /// Comma-separated wave numbers ħk/mc.
    #[arg(long, default_value = "0.1,1,10", allow_hyphen_values = true)]
    pub k: String,
    /// Comma-separated potentials V₀/mc².
    #[arg(long, default_value = "0,0.1,-0.1", allow_hyphen_values = true)]
    pub v0: String,
    /// Initial damping rate as a fraction of the integrand frequency.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Coulomb coupling e² in units with c = m = 1 (the classical radius).
    #[arg(long, default_value_t = 0.1)]
    pub coupling: f64,
    #[arg(long, value_parser = parse_vector, default_value = "10,0,0", allow_hyphen_values = true)]
    pub x0: Vector3<f64>,
    #[arg(long, value_parser = parse_vector, default_value = "0,0.08,0.01", allow_hyphen_values = true)]
    pub p0: Vector3<f64>,
    #[arg(long, default_value_t = 2000.0)]
    pub tau_span: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Emit every N-th accepted step.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct FieldsArgs {
    /// Field point minus retarded source position; evaluates a single point.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub r: Option<Vector3<f64>>,
    /// Proper velocity at emission.
    #[arg(long, value_parser = parse_vector, default_value = "0,0,0", allow_hyphen_values = true)]
    pub u: Vector3<f64>,
    /// Proper acceleration at emission.
    #[arg(long, value_parser = parse_vector, default_value = "0,0,0", allow_hyphen_values = true)]
    pub a: Vector3<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub charge: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

fn parse_vector(s: &str) -> Result<Vector3<f64>, String> {
    let parts = parse_list(s)?;
    match parts.as_slice() {
        [x, y, z] => Ok(Vector3::new(*x, *y, *z)),
        _ => Err(format!("expected three comma-separated numbers, got `{s}`")),
    }
}

pub(crate) fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("`{p}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{p}` is not finite"))
            }
        })
        .collect()
}

/// What a command produced: exit code plus both output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: String) -> Self {
        let mut stderr = message;
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code, stdout: String::new(), stderr }
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<propertime::Error> for Failure {
    fn from(e: propertime::Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        Self { code, message: format!("error: {e}") }
    }
}

/// Report text plus an optional note for stderr and a non-zero code when a
/// check inside the report failed.
pub(crate) struct Produced {
    text: String,
    code: i32,
    note: Option<String>,
}

impl Produced {
    pub(crate) fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK, note: None }
    }
}

pub(crate) struct Context {
    pub constants: PhysicalConstants,
    pub format: ReportFormat,
    pub seed: u64,
}

fn read_file(path: &PathBuf, what: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("error: cannot read {what} {}: {e}", path.display())))
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome::failure(EXIT_USAGE, text),
            };
        }
    };
    match execute(&cli) {
        Ok(produced) => {
            let mut stderr = produced.note.map(|n| n + "\n").unwrap_or_default();
            let stdout = match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &produced.text) {
                        return Outcome::failure(EXIT_USAGE, format!("error: cannot write {}: {e}", path.display()));
                    }
                    stderr.push_str(&format!("wrote {}\n", path.display()));
                    String::new()
                }
                None => produced.text,
            };
            Outcome { code: produced.code, stdout, stderr }
        }
        Err(f) => Outcome::failure(f.code, f.message),
    }
}

fn execute(cli: &Cli) -> Result<Produced, Failure> {
    let constants = match &cli.constants {
        Some(path) => load_constants(Some(&read_file(path, "constants file")?))?,
        None => load_constants(None)?,
    };
    let ctx = Context { constants, format: cli.format.into(), seed: cli.seed };
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Compare(a) => {
            let text = a.nist.as_ref().map(|p| read_file(p, "level table")).transpose()?;
            commands::compare(&ctx, text.as_deref())
        }
        Command::Kernel(a) => commands::kernel(&ctx, a),
        Command::Separate(a) => commands::separate(&ctx, a),
        Command::Orbit(a) => commands::orbit(&ctx, a),
        Command::BoostCheck(a) => commands::boost_check(&ctx, a),
        Command::Fields(a) => commands::fields(&ctx, a),
    }
}
