mod args;
mod commands;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use mertens_core::Error;

use args::{Cli, Format, RunConfig};
use commands::Failure;
use report::Report;

const EXIT_USAGE: u8 = 2;
const EXIT_RANGE: u8 = 3;
const EXIT_CONSISTENCY: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::LimitOutOfRange(_)
        | Error::BeyondTable { .. }
        | Error::CutoffBelowModulus { .. }
        | Error::CorruptCache { .. }
        | Error::Io(_) => EXIT_RANGE,
        Error::InvalidTarget { .. }
        | Error::InvalidArgument(_)
        | Error::BelowTwo(_)
        | Error::NotPrime(_)
        | Error::NotFundamental(_)
        | Error::NotInTable(_) => EXIT_USAGE,
        Error::PrincipalCharacter
        | Error::BranchTracking { .. }
        | Error::BranchResidue { .. }
        | Error::Consistency(_) => EXIT_CONSISTENCY,
    }
}

fn advice(e: &Error) -> Option<&'static str> {
    match e {
        Error::BeyondTable { .. } | Error::LimitOutOfRange(_) => Some("raise --limit (or lower x)"),
        Error::CutoffBelowModulus { .. } => Some("raise --correction-cutoff above q"),
        Error::CorruptCache { .. } => Some("delete the cache file or choose another --cache-dir"),
        _ => None,
    }
}

fn emit(report: &Report, cfg: &RunConfig) -> anyhow::Result<()> {
    let generated = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0).to_string();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cfg.format {
        Format::Csv => {
            let line = cfg.meta.then(|| report.meta_line(&generated));
            report.write_csv(&mut out, line.as_deref())?;
        }
        Format::Json => {
            let json = report.to_json(cfg.meta.then_some(generated.as_str()));
            serde_json::to_writer_pretty(&mut out, &json)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (report, failure) = match commands::run(&cli.command, &cfg) {
        Ok(r) => (Some(r), None),
        Err(Failure { error, report }) => (report, Some(error)),
    };
    if let Some(r) = &report {
        if let Err(e) = emit(r, &cfg) {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(EXIT_RANGE);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = advice(&e) {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
