mod args;
mod error;
mod report;
mod run;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use crate::args::{Cli, Command, EmbedCmd, Format};
use crate::error::{CliError, EXIT_INTERNAL};
use crate::report::{recorded_config, render, Outcome, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("herzlab: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(CliError::internal)?;
    }
    let default_format = match cli.command {
        Command::Embed(EmbedCmd::Counterexample(_)) => Format::Csv,
        _ => Format::Json,
    };
    let format = cli.format.unwrap_or(default_format);
    let cfg = RunConfig { seed: cli.seed, format, output: cli.output, command: cli.command };
    let (text, dest) = match &cfg.command {
        Command::Replay(a) => (replay(&a.report, format)?, cfg.output.as_deref()),
        _ => (render(&cfg, &run::execute(&cfg, true)?)?, cfg.output.as_deref()),
    };
    emit(&text, dest)
}

fn emit(text: &str, dest: Option<&Path>) -> Result<(), CliError> {
    match dest {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(CliError::internal),
    }
}

/// Re-runs the recorded configuration without side effects and requires the
/// regenerated report to match the stored one byte for byte.
fn replay(path: &Path, format: Format) -> Result<String, CliError> {
    let stored = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let recorded = recorded_config(&stored)?;
    let fresh = render(&recorded, &run::execute(&recorded, false)?)?;
    let identical = fresh == stored;
    let first_difference = (!identical).then(|| {
        let line = fresh.lines().zip(stored.lines()).position(|(a, b)| a != b);
        line.unwrap_or_else(|| fresh.lines().count().min(stored.lines().count())) + 1
    });
    let summary = RunConfig {
        seed: recorded.seed,
        format,
        output: None,
        command: Command::Replay(args::ReplayArgs { report: path.to_path_buf() }),
    };
    let result = json!({ "identical": identical, "bytes": stored.len(), "first_differing_line": first_difference });
    let text = render(&summary, &Outcome::new("replay", result))?;
    if !identical {
        eprint!("{text}");
        return Err(CliError {
            code: EXIT_INTERNAL,
            message: format!("replay of {} differs from the stored report", path.display()),
        });
    }
    Ok(text)
}
