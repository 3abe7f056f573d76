//! Command implementations behind the `cglmp` binary.

pub mod args;
pub mod commands;
pub mod model;
pub mod output;

use args::{Cli, Command, Format};
use output::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error(transparent)]
    Core(#[from] cglmp_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad arguments or inputs, 3 for a degenerate angle, 4 for a
    /// resource cap.
    pub fn exit_code(&self) -> i32 {
        use cglmp_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Cap(_) => 4,
            CliError::Core(E::DegenerateAngle { .. }) => 3,
            CliError::Core(E::OracleCap { .. } | E::DimensionCap { .. }) => 4,
            CliError::Core(_) => 2,
        }
    }
}

fn format_of(command: &Command) -> Format {
    match command {
        Command::QuantumS(a) => a.format,
        Command::Bound(a) => a.format,
        Command::Audit(a) => a.format,
        Command::Scan(a) => a.format,
        Command::Chsh(a) | Command::Matrices(a) => a.format,
        Command::Sample(a) => a.format,
        Command::ProbTable(a) => a.format,
        Command::HvtS(a) => a.format,
    }
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::QuantumS(a) => commands::quantum_s(a),
        Command::Bound(a) => commands::bound(a),
        Command::Audit(a) => commands::audit(a),
        Command::Scan(a) => commands::scan(a),
        Command::Chsh(a) => commands::chsh(a),
        Command::Sample(a) => commands::sample(a),
        Command::ProbTable(a) => commands::prob_table(a),
        Command::HvtS(a) => commands::hvt_s(a),
        Command::Matrices(a) => commands::matrices(a),
    }
}

/// Runs a parsed command line and renders its report.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let report = execute(&cli.command)?;
    Ok(match (format_of(&cli.command), &report.table) {
        (Format::Csv, Some(table)) => output::to_csv(table),
        (Format::Csv, None) => {
            return Err(CliError::Usage(format!("{} has no CSV form", report.doc.command)));
        }
        (Format::Json, _) => output::to_json(&report.doc),
    })
}
