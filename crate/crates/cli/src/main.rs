use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use codiff_cli::{parse_grid, run_text, CliError, Command, RunOptions};

/// Extensions and infinitesimal deformations of associative algebras,
/// computed exactly over the rationals.
#[derive(Parser, Debug)]
#[command(name = "codiff", version)]
struct Args {
    /// Problem file (TOML).
    problem: PathBuf,
    /// Overrides the command named in the problem file.
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scalar grid for candidate sweeps, e.g. "-2,-1,0,1,2".
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid_override: Option<codiff::extensions::ScalarGrid>,
    /// Sweep candidates on all cores. Output does not change.
    #[arg(long)]
    parallel: bool,
    /// Work on the restricted complex (mixed cochains need an input from M).
    #[arg(long)]
    restricted_complex: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let options = RunOptions {
        grid_override: args.grid_override,
        parallel: args.parallel,
        restricted: args.restricted_complex,
    };
    let result = std::fs::read_to_string(&args.problem)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.problem.display())))
        .and_then(|text| run_text(&text, args.command, &options));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", args.problem.display());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    print!("{}", report.render());
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.outcome.exit_code() as u8)
}
