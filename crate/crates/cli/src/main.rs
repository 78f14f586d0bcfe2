use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use folcris_cli::recheck::recheck;
use folcris_cli::report::{render_json, render_text};
use folcris_cli::{run, CliError, Command, ProblemFile};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Foliations, Bott vanishing and residues over Z/p^n.
#[derive(Parser, Debug)]
#[command(name = "folcris", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem file (JSON).
    file: PathBuf,
    /// Truncation bound N for cohomology computations.
    #[arg(long)]
    truncate: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-verify every certificate from the printed witnesses.
    #[arg(long)]
    recheck: bool,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FOLCRIS_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| CliError::Input(format!("FOLCRIS_THREADS={v} is not a count")))?;
    // A second initialization only happens in embedders; ignore it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(args: &Args) -> Result<i32, CliError> {
    configure_threads()?;
    let src = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.file.display())))?;
    let problem = ProblemFile::from_json(&src)?;
    let mut outcome = run(args.command, &problem, args.truncate)?;
    if args.recheck {
        let checks = recheck(&outcome.report)?;
        let passed = checks.iter().all(|c| c.holds);
        let list: Vec<_> = checks.iter().map(|c| json!({ "check": c.name, "holds": c.holds })).collect();
        outcome.report["recheck"] = json!({ "passed": passed, "checks": list });
        if !passed {
            outcome.exit = 3;
        }
    }
    let text = match args.format {
        Format::Json => render_json(&outcome.report),
        Format::Text => render_text(&outcome.report),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("folcris: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
