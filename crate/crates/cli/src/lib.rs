//! Problem files in, reports out.

pub mod problem;
pub mod report;
pub mod run;

pub use problem::{parse, Command, Param, ParseError, ParseErrorKind, Problem};
pub use report::{CochainRecord, Item, Outcome, Report, SpaceRecord, TermRecord};
pub use run::{run, CliError, RunOptions};

use codiff::extensions::ScalarGrid;
use codiff::linalg::parse_scalar;

/// Parses `"-1,0,1/2"` into a grid.
pub fn parse_grid(text: &str) -> Result<ScalarGrid, String> {
    let values = text
        .split(',')
        .map(|s| {
            parse_scalar(s).ok_or_else(|| format!("malformed rational `{}` in grid", s.trim()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ScalarGrid::new(values).map_err(|e| e.to_string())
}

/// Reads, parses and runs a problem. `command` overrides the file's own.
pub fn run_text(
    text: &str,
    command: Option<Command>,
    options: &RunOptions,
) -> Result<Report, CliError> {
    let problem = parse(text)?;
    let command = command.or(problem.command).ok_or_else(|| {
        CliError::Precondition("no command: set `command` in the file or pass --command".into())
    })?;
    run(&problem, command, options)
}
