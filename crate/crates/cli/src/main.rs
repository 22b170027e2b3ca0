use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use unital_lab::config::Target;
use unital_lab::{run, Cli, CliError, Format, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let start = Instant::now();
    let report = run(&cfg)?;
    let text = match cfg.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    let s = &report.summary;
    eprintln!(
        "{} records: {} passed, {} failed, {} skipped ({:.2}s)",
        s.records,
        s.passed,
        s.failed,
        s.skipped,
        start.elapsed().as_secs_f64()
    );
    if s.failed > 0 {
        return Ok(2);
    }
    let explicit_point = matches!(cfg.targets.as_slice(), [Target::Point(_)]);
    if explicit_point && cfg.single_tuple() && s.skipped == s.records {
        if let Some(reason) = report.records[0].get("reason").and_then(|r| r.as_str()) {
            eprintln!("error: {reason}");
        }
        return Ok(1);
    }
    Ok(0)
}
