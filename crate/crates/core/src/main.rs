use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cycle_relations::cli::{run, RunConfig, EXIT_FAIL};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let outcome = run(&cfg);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.report),
        None => std::io::stdout().write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_FAIL as u8);
    }
    ExitCode::from(outcome.code as u8)
}
