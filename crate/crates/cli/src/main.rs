mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] kneser::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot serialize the report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot set up worker threads: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use kneser::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::Violation(_) => 1,
                E::Parse { .. }
                | E::InvalidInput(_)
                | E::GroupMismatch
                | E::Singular
                | E::Precondition(_) => 2,
                E::Hypothesis(_) => 3,
                E::Capacity { .. } | E::Budget { .. } | E::Overflow(_) => 4,
            },
            CliError::Json(_) | CliError::Threads(_) => 2,
        }
    }
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()?;
    }
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Sweep(a) => commands::sweep(a, cli.threads),
        Command::Density(a) => commands::density(a),
        Command::Lad(a) => commands::lad(a),
        Command::Ubd(a) => commands::ubd(a),
        Command::Refine(a) => commands::refine(a),
        Command::KneserLad(a) => commands::kneser_lad(a),
        Command::Kj(a) => commands::kj(a),
        Command::Hnf(a) => commands::hnf(a),
        Command::Examples(a) => commands::examples(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if cli.json {
                let _ = writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&out.record).unwrap_or_default()
                );
            } else {
                let _ = write!(stdout, "{}", render::text(&out.record));
                for line in &out.log {
                    eprintln!("{line}");
                }
            }
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let record = serde_json::json!({
                    "schema_version": render::SCHEMA_VERSION,
                    "status": "error",
                    "exit_code": code,
                    "error": e.to_string(),
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&record).unwrap_or_default()
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
