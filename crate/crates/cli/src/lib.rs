//! Command-line front end: solves, strategy tables, simulation and the
//! cross-validation run, each writing into its own timestamped directory.

pub mod acceptance;
mod commands;
pub mod output;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use jobswitch::obstacle::{Grid, Method};
use jobswitch::{Model, ModelParams};
use serde::Serialize;

pub use commands::run_command;

#[derive(Parser, Debug, Clone)]
#[command(name = "jobswitch", version, about = "Optimal job switching with retirement: dual solvers and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Solve the double obstacle problem and extract the free boundaries.
    SolvePde,
    /// Solve the coupled integral equations for the dual boundaries.
    SolveIe,
    /// Wealth boundaries and feedback-policy tables.
    Strategy,
    /// Monte Carlo run of the switching strategy on dual paths.
    Simulate,
    /// Full cross-validation; exits with status 4 if any criterion fails.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SolvePde => "solve-pde",
            Command::SolveIe => "solve-ie",
            Command::Strategy => "strategy",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    /// Projected SOR on the linear complementarity problem.
    Psor,
    /// Smooth penalty scheme with Newton iterations.
    Penalty,
    /// Coupled integral equations (boundaries only).
    Ie,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
pub struct Options {
    /// JSON file with the model parameters; the reference set is used when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory that receives the run directory.
    #[arg(long, global = true, default_value = "runs")]
    pub out: PathBuf,
    /// Boundary source: psor or penalty for the PDE, ie for the integral equations.
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    /// Final penalty parameter of the penalty scheme.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub eps: f64,
    /// PDE grid as nx,nt,n.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<GridArg>,
    #[arg(long, global = true, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, global = true, default_value_t = 3000)]
    pub steps: usize,
    #[arg(long, global = true, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Print nothing but errors.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridArg {
    pub nx: usize,
    pub nt: usize,
    pub n: f64,
}

fn parse_grid(s: &str) -> Result<GridArg, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected nx,nt,n, got '{s}'"));
    }
    let nx = parts[0].parse().map_err(|_| format!("nx '{}' is not an integer", parts[0]))?;
    let nt = parts[1].parse().map_err(|_| format!("nt '{}' is not an integer", parts[1]))?;
    let n = parts[2].parse().map_err(|_| format!("n '{}' is not a number", parts[2]))?;
    Ok(GridArg { nx, nt, n })
}

impl Options {
    pub fn model(&self) -> Result<Model, Failure> {
        let params = match &self.config {
            None => ModelParams::reference(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
                ModelParams::from_json(&text)?
            }
        };
        Ok(Model::new(params)?)
    }

    pub fn grid(&self, model: &Model) -> Result<Grid, Failure> {
        let grid = match self.grid {
            None => Grid::standard(model),
            Some(g) => Grid::new(g.n, g.nx, g.nt, model.horizon())?,
        };
        grid.check_for(model)?;
        Ok(grid)
    }

    /// PDE scheme for `--method`; the integral equations fall back to PSOR.
    pub fn pde_method(&self) -> Result<Method, Failure> {
        match self.method {
            Some(MethodArg::Penalty) => {
                if !(self.eps > 0.0 && self.eps < 1.0) {
                    return Err(Failure::Validation(format!("--eps must lie in (0, 1), got {}", self.eps)));
                }
                Ok(Method::penalty_to(self.eps))
            }
            _ => Ok(Method::ProjectedRelaxation),
        }
    }
}

/// Why a command failed; each kind maps to one exit status.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
    Acceptance(String),
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Validation(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Acceptance(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "validation error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Acceptance(m) => write!(f, "acceptance failure: {m}"),
        }
    }
}

impl From<jobswitch::Error> for Failure {
    fn from(e: jobswitch::Error) -> Self {
        match e {
            jobswitch::Error::Numerical { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_command(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag_parses() {
        assert_eq!(parse_grid("401, 600, 10").unwrap(), GridArg { nx: 401, nt: 600, n: 10.0 });
        assert!(parse_grid("401,600").is_err());
        assert!(parse_grid("a,600,10").is_err());
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        let e: Failure = jobswitch::Error::Input("x".into()).into();
        assert_eq!(e.exit_code(), 2);
        let e: Failure = jobswitch::Error::Numerical {
            stage: "s".into(),
            detail: "d".into(),
            worst_residual: 1.0,
        }
        .into();
        assert_eq!(e.exit_code(), 3);
        assert_eq!(Failure::Acceptance("a".into()).exit_code(), 4);
    }
}
