//! `hilbert`: command-line front end for Hilbert-geometry checks.
//!
//! Exit codes: 0 ok, 1 usage or parse error, 2 violated precondition,
//! 3 property violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hilbert_core::verify::Suite;
use hilbert_core::GeomError;

mod commands;
mod report;
mod svg;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Precondition(String),
    Violation(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
            CliError::Violation(m) => write!(f, "property violated: {m}"),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::InvalidSpec(_) => CliError::Usage(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hilbert", version, about = "Hilbert geometry of convex domains: distances, balls, covers and property suites")]
pub struct Cli {
    /// Body description (JSON).
    #[arg(long, global = true)]
    pub body: Option<PathBuf>,
    /// Seed for every sampling loop.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for reports and figures.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Override the main sample count of the subcommand.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Override the main tolerance of the subcommand.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Hilbert distance between two points.
    Dist {
        #[arg(long, value_parser = parse_point)]
        x: Coords,
        #[arg(long, value_parser = parse_point)]
        y: Coords,
    },
    /// Draw the boundary of a Hilbert ball (ball.svg).
    Ball {
        #[arg(long, value_parser = parse_point)]
        center: Coords,
        #[arg(long, value_parser = parse_positive)]
        t: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Build and audit the layered cover (cover.svg, cover.json, audit.json, audit.csv).
    Cover {
        /// Ring width; must exceed 4r.
        #[arg(long = "R", value_parser = parse_positive)]
        big_r: f64,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Radius of the balls in the multiplicity probe.
        #[arg(long = "r", value_parser = parse_positive)]
        r: f64,
    },
    /// Run property suites (verify.json, verify.csv).
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Sample Euclidean gaps of Hilbert-close pairs far from the base point (corona.json, corona.csv).
    ProbeCorona {
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12,14,16")]
        radii: Vec<f64>,
    },
    /// Greedy packing of a Hilbert ball against its volume bound (packing.json, packing.csv).
    Packing {
        #[arg(long = "R", value_parser = parse_positive)]
        big_r: f64,
        #[arg(long, value_parser = parse_positive)]
        eps: f64,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
    },
}

/// Point coordinates given as `a,b[,c…]`.
#[derive(Clone, Debug)]
pub struct Coords(pub Vec<f64>);

fn parse_point(s: &str) -> Result<Coords, String> {
    let coords: Result<Vec<f64>, _> = s.split(',').map(|c| c.trim().parse::<f64>()).collect();
    match coords {
        Ok(c) if !c.is_empty() && c.iter().all(|v| v.is_finite()) => Ok(Coords(c)),
        _ => Err(format!("expected comma-separated numbers, got '{s}'")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HILBERT_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
