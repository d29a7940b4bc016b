//! Command-line front end: argument handling, output formats and batch mode.

pub mod args;
pub mod batch;
pub mod render;

use std::fmt;
use std::io::Write;

use serde::Serialize;
use teleskope_core::analysis::{self, AnalysisRequest};
use teleskope_core::Error;

use args::{Cli, Command, LinkageArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_NON_GENERIC: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// An error with the exit code it maps to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

impl Failure {
    pub fn new(kind: &str, message: impl Into<String>, exit_code: u8) -> Self {
        Failure {
            kind: kind.to_string(),
            message: message.into(),
            exit_code,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::new("usage", message, EXIT_USAGE)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_non_generic() {
            EXIT_NON_GENERIC
        } else if matches!(e, Error::Contract(_)) {
            EXIT_FAILURE
        } else {
            EXIT_USAGE
        };
        Failure::new(e.kind(), e.to_string(), code)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new("io", e.to_string(), EXIT_FAILURE)
    }
}

/// Splits `lo:hi`.
pub fn split_tele(text: &str) -> Result<(String, String), Failure> {
    match text.split_once(':') {
        Some((lo, hi)) if !lo.trim().is_empty() && !hi.trim().is_empty() => {
            Ok((lo.trim().to_string(), hi.trim().to_string()))
        }
        _ => Err(Failure::new(
            "parse",
            format!("cannot parse tele from {text:?}: expected lo:hi"),
            EXIT_USAGE,
        )),
    }
}

pub fn request(args: &LinkageArgs) -> Result<AnalysisRequest, Failure> {
    let (lo, hi) = split_tele(&args.tele)?;
    Ok(AnalysisRequest::new(&args.fixed, &lo, &hi)
        .with_tele_index(args.tele_index)
        .with_recursive(args.recursive))
}

/// Runs one command, writing its report to `out`; returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Analyze(linkage) => {
            let report = analysis::analyze(&request(linkage)?)?;
            out.write_all(render::analysis(&report, linkage.format)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Verify { linkage, grid } => {
            let report = analysis::verify(&request(linkage)?, *grid)?;
            out.write_all(render::analysis(&report, linkage.format)?.as_bytes())?;
            let passed = report.oracle.as_ref().is_some_and(|o| o.passed());
            Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Sweep { fixed, format } => {
            let list: Vec<String> = fixed.split(',').map(|s| s.trim().to_string()).collect();
            let report = analysis::sweep(&list)?;
            out.write_all(render::sweep(&report, *format)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Equilateral { n, a, b, format } => {
            let report = equilateral(*n, a, b)?;
            out.write_all(render::equilateral(&report, *format)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Batch { input } => {
            let text = if input == "-" {
                std::io::read_to_string(std::io::stdin())?
            } else {
                std::fs::read_to_string(input)?
            };
            let pool = batch::pool()?;
            let lines = pool.install(|| batch::process(&text));
            let mut failed = false;
            for line in &lines {
                failed |= line.failed;
                writeln!(out, "{}", line.json)?;
            }
            Ok(if failed { EXIT_FAILURE } else { EXIT_OK })
        }
    }
}

/// The equilateral report, failing when the closed form and the general
/// formula disagree.
pub fn equilateral(n: usize, a: &str, b: &str) -> Result<analysis::EquilateralReport, Failure> {
    let report = analysis::equilateral(n, a, b)?;
    if !report.agree {
        return Err(Failure::new(
            "mismatch",
            format!(
                "closed form {:?} disagrees with the general formula {:?}",
                report.closed_form.ranks, report.general.ranks
            ),
            EXIT_FAILURE,
        ));
    }
    Ok(report)
}
