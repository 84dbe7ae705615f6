//! `warpgeom` command-line front end.
//!
//! Exit status: 0 success, 1 check failed, 2 config error, 3 hypothesis
//! violation.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;
use config::{Overrides, RunConfig};
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "warpgeom", version, about = "Star-shaped hypersurfaces in warped-product manifolds")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV output; without it CSV goes to stdout and the report to stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Ambient dimension of the profile.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Latitude count of the fiber grid.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Warping-profile conditions.
    Profile {
        #[command(subcommand)]
        action: ProfileAction,
    },
    /// Curvature of a graph surface.
    Surface {
        #[command(subcommand)]
        action: SurfaceAction,
    },
    /// Heintze-Karcher and Minkowski gaps.
    Ineq {
        #[command(subcommand)]
        action: IneqAction,
    },
    /// Constant-sigma_p solves from perturbed slices.
    Rigidity {
        #[command(subcommand)]
        action: RigidityAction,
    },
}

#[derive(Subcommand, Debug)]
enum ProfileAction {
    Check,
}

#[derive(Subcommand, Debug)]
enum SurfaceAction {
    Analyze,
}

#[derive(Subcommand, Debug)]
enum IneqAction {
    Verify,
}

#[derive(Subcommand, Debug)]
enum RigidityAction {
    Run,
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    cfg.apply(&Overrides {
        out: cli.out.clone(),
        tol: cli.tol,
        seed: cli.seed,
        n: cli.n,
        grid: cli.grid,
    });
    let outcome = match cli.command {
        Command::Profile { .. } => commands::profile_check(&cfg)?,
        Command::Surface { .. } => commands::surface_analyze(&cfg)?,
        Command::Ineq { .. } => commands::ineq_verify(&cfg)?,
        Command::Rigidity { .. } => commands::rigidity_run(&cfg)?,
    };
    emit(&outcome, cfg.out.as_deref())?;
    Ok(outcome)
}

fn emit(outcome: &Outcome, out: Option<&Path>) -> CliResult<()> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io(dir))?;
            for (name, contents) in &outcome.artifacts {
                let path = dir.join(name);
                std::fs::write(&path, contents).map_err(io(&path))?;
            }
            print!("{}", outcome.report);
        }
        None => {
            eprint!("{}", outcome.report);
            let mut stdout = std::io::stdout().lock();
            for (_, contents) in &outcome.artifacts {
                stdout.write_all(contents.as_bytes()).map_err(io(Path::new("<stdout>")))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => ExitCode::from(u8::from(!outcome.passed)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
