//! Library side of the `kbill` command-line tool.
//!
//! [`Cli`] is the clap definition, [`RunConfig`] the validated settings a
//! command runs with and [`run`] the dispatcher returning the process exit
//! code. [`suite`] holds the seeded random generators shared with the
//! acceptance tests.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kepler_billiards::tolerances::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod commands;
pub mod output;
pub mod suite;

pub use output::Format;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VALIDATION: u8 = 1;
    pub const TERMINATED: u8 = 2;
    pub const DISAGREEMENT: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "kbill", version, about = "Zero-energy Kepler billiards and their Birkhoff lifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one orbit and write one row per bounce.
    Simulate(RunArgs),
    /// Classify K-convexity with the curvature test and the parabola sweep.
    Kconvex(RunArgs),
    /// Compare the direct Kepler orbit with lift, Birkhoff, project.
    Conjugacy(RunArgs),
    /// Write a phase-portrait dataset on a seed grid.
    Portrait(RunArgs),
    /// Fit a quadratic first integral to one orbit.
    FitIntegral(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Kconvex(_) => "kconvex",
            Command::Conjugacy(_) => "conjugacy",
            Command::Portrait(_) => "portrait",
            Command::FitIntegral(_) => "fit-integral",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::Kconvex(a)
            | Command::Conjugacy(a)
            | Command::Portrait(a)
            | Command::FitIntegral(a) => a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// The Kepler billiard in the given table.
    Kepler,
    /// The ordinary billiard in the given table.
    Birkhoff,
    /// The ordinary billiard in the square-root lift of the table.
    Lifted,
}

/// `N×M` grid size, written `NxM`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid(pub usize, pub usize);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
        let (a, b) = (parse(a)?, parse(b)?);
        if a == 0 || b == 0 {
            return Err("grid sizes must be positive".into());
        }
        Ok(Grid(a, b))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

/// Brute-force sweep size `N_θ×N_ℓ×N_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleGrid(pub usize, pub usize, pub usize);

impl FromStr for OracleGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        let [a, b, c] = parts[..] else { return Err(format!("expected AxBxC, got `{s}`")) };
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
        let g = OracleGrid(parse(a)?, parse(b)?, parse(c)?);
        if g.0 == 0 || g.1 == 0 || g.2 < 3 {
            return Err("sweep sizes must be positive (at least 3 wall samples)".into());
        }
        Ok(g)
    }
}

/// Flags shared by every command.
#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Table JSON file.
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Kepler)]
    pub mode: Mode,
    /// Launch wall parameter in [0, 1); random (from --seed) when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    /// Launch angle from the tangent, in (0, π); random when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub angle: Option<f64>,
    /// Bounce count (per seed for portraits). Defaults: simulate 100,
    /// conjugacy 200, portrait 500, fit-integral 1000.
    #[arg(long)]
    pub bounces: Option<usize>,
    /// Portrait seed grid `N_sxN_φ`.
    #[arg(long, default_value = "20x20")]
    pub grid: Grid,
    /// Parabola sweep size for kconvex, `N_θxN_ℓxN_t`.
    #[arg(long, default_value = "256x256x2048")]
    pub oracle_grid: OracleGrid,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Energy residual tolerance [default: 1e-10].
    #[arg(long, allow_negative_numbers = true)]
    pub tol_energy: Option<f64>,
    /// Root-finding tolerance [default: 1e-13].
    #[arg(long, allow_negative_numbers = true)]
    pub tol_root: Option<f64>,
    /// Bounce-point agreement for conjugacy [default: 1e-8].
    #[arg(long, allow_negative_numbers = true)]
    pub tol_conjugacy: Option<f64>,
    /// Minimum crossing sine for a transversal bounce [default: 1e-8].
    #[arg(long, allow_negative_numbers = true)]
    pub tol_transversality: Option<f64>,
    /// Seed for randomly drawn launches.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Validated settings for one command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub table: PathBuf,
    pub mode: Mode,
    /// Launch `(t, angle)`.
    pub initial: (f64, f64),
    pub grid: (usize, usize),
    pub oracle_grid: (usize, usize, usize),
    pub bounces: usize,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_command(command: &Command) -> Result<Self, String> {
        let a = command.args();
        let mut tol = Tolerances::default();
        for (value, slot) in [
            (a.tol_energy, &mut tol.energy),
            (a.tol_root, &mut tol.root),
            (a.tol_conjugacy, &mut tol.conjugacy),
            (a.tol_transversality, &mut tol.transversality),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(field) = tol.invalid_field() {
            return Err(format!("tolerance `{field}` must be positive and finite"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let drawn = suite::random_launch(&mut rng);
        let initial = (a.t0.unwrap_or(drawn.0), a.angle.unwrap_or(drawn.1));
        if !initial.0.is_finite() {
            return Err(format!("--t0 must be finite, got {}", initial.0));
        }
        if !(initial.1 > 0.0 && initial.1 < PI) {
            return Err(format!("--angle must lie in (0, π), got {}", initial.1));
        }
        let bounces = a.bounces.unwrap_or(match command {
            Command::Simulate(_) | Command::Kconvex(_) => 100,
            Command::Conjugacy(_) => 200,
            Command::Portrait(_) => 500,
            Command::FitIntegral(_) => 1000,
        });
        Ok(Self {
            command: command.name(),
            table: a.table.clone(),
            mode: a.mode,
            initial,
            grid: (a.grid.0, a.grid.1),
            oracle_grid: (a.oracle_grid.0, a.oracle_grid.1, a.oracle_grid.2),
            bounces,
            tolerances: tol,
            out: a.out.clone(),
            format: a.format,
            seed: a.seed,
        })
    }
}

/// Runs a parsed command line and returns the exit code. Diagnostics go to
/// stderr; datasets go to `--out` or stdout.
pub fn run(cli: &Cli) -> u8 {
    let config = match RunConfig::from_command(&cli.command) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("kbill {}: {msg}", cli.command.name());
            return exit::VALIDATION;
        }
    };
    let result = match cli.command {
        Command::Simulate(_) => commands::cmd_simulate(&config),
        Command::Kconvex(_) => commands::cmd_kconvex(&config),
        Command::Conjugacy(_) => commands::cmd_conjugacy(&config),
        Command::Portrait(_) => commands::cmd_portrait(&config),
        Command::FitIntegral(_) => commands::cmd_fit_integral(&config),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kbill {}: {e:#}", config.command);
            exit::VALIDATION
        }
    }
}
