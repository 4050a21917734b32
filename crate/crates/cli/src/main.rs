mod args;
mod audit;
mod compute;
mod config;
mod error;
mod grid;
mod output;
mod simulate;

use args::{Cli, Command, Format};
use clap::Parser;
use config::Echo;
use error::CliError;
use std::io::Write;
use walkarith_core::Goldens;

/// Pins shipped with the binary, used when --pins is not given.
const BUILTIN_PINS: &str = include_str!("../../../goldens.txt");

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = match real_main(args) {
        Ok(()) => 0,
        Err(e) => {
            let msg = serde_json::json!({"error": e.kind(), "message": e.to_string()});
            eprintln!("{msg}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `walkarith --help` for usage");
            }
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn real_main(args: Vec<String>) -> Result<(), CliError> {
    let args = config::expand(args)?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            std::process::exit(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let mut echo = Echo::from_args(&args);
    if let Some(t) = cli.threads {
        echo.set("threads", t);
    }
    if let Some(p) = &cli.echo_config {
        std::fs::write(p, echo.to_file())?;
    }
    let pins = match &cli.pins {
        Some(p) => Goldens::load(p)?,
        None => Goldens::parse(BUILTIN_PINS)?,
    };
    let mut out = output::open(cli.output.as_deref())?;
    match &cli.command {
        Command::Compute { target } => {
            let v = compute::run(target, &pins)?;
            output::write_records(&mut *out, cli.format.unwrap_or(Format::Json), &[v])?;
        }
        Command::Simulate { target } => {
            let lines = simulate::run(target)?;
            output::write_records(&mut *out, cli.format.unwrap_or(Format::Json), &lines)?;
        }
        Command::Audit { audit } => {
            let rows = audit::rows(audit)?;
            output::write_rows(&mut *out, cli.format.unwrap_or(Format::Csv), &rows)?;
            let (mut summary, regressed) = audit::summary(audit.name(), &rows, &pins, cli.slack);
            summary["config"] = echo.to_json();
            let text = format!("{summary}\n");
            match &cli.summary {
                Some(p) => std::fs::write(p, text)?,
                None => std::io::stderr().write_all(text.as_bytes())?,
            }
            if regressed {
                return Err(CliError::Regression(format!(
                    "{} max scaled error {} exceeds pin {} by more than {}%",
                    audit.name(),
                    summary["max_scaled_err"],
                    summary["pin"],
                    cli.slack * 100.0
                )));
            }
        }
    }
    Ok(())
}
