//! Command-line front end: argument parsing, report rendering and exit codes.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, DimensionCommand, Format, MeasureCommand};
use output::{render, Report, Tabular};
use sadic_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Io(_) => EXIT_USAGE,
        Error::Domain(_) | Error::Contract(_) | Error::NotInSupport { .. } | Error::Resource(_) => EXIT_DOMAIN,
    }
}

/// Runs the command and returns the rendered report.
pub fn execute(cli: &Cli) -> Result<String, Error> {
    fn go<R: Serialize + Tabular>(r: Result<Report<R>, Error>, format: Format) -> Result<String, Error> {
        r.map(|rep| render(&rep, format))
    }
    let fmt = cli.format;
    match &cli.command {
        Command::Classify(a) => go(commands::cmd_classify(a), fmt),
        Command::Transform(a) => go(commands::cmd_transform(a), fmt),
        Command::Dimension(DimensionCommand::Be(a)) => go(commands::cmd_be(a), fmt),
        Command::Dimension(DimensionCommand::Covering(a)) => go(commands::cmd_covering(a), fmt),
        Command::Dimension(DimensionCommand::Measure(a)) => go(commands::cmd_measure_dimension(a), fmt),
        Command::Dimension(DimensionCommand::Estimate(a)) => go(commands::cmd_estimate(a), fmt),
        Command::Dimension(DimensionCommand::GSup(a)) => go(commands::cmd_gsup(a), fmt),
        Command::Measure(MeasureCommand::Sample(a)) => go(commands::cmd_sample(a), fmt),
        Command::Measure(MeasureCommand::Cdf(a)) => go(commands::cmd_cdf(a), fmt),
        Command::Measure(MeasureCommand::Entropy(a)) => go(commands::cmd_entropy(a), fmt),
        Command::Table(a) => go(commands::cmd_table(a), fmt),
        Command::Oscillation(a) => go(commands::cmd_oscillation(a), fmt),
    }
}

/// Parses `args`, runs, writes output and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            let _ = if ok { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return if ok { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let text = match execute(&cli) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
