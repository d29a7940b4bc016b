use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use teleskope_cli::args::Cli;
use teleskope_cli::{execute, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut stdout = std::io::stdout().lock();
    let code = match execute(&cli, &mut stdout) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code
        }
    };
    let _ = stdout.flush();
    ExitCode::from(code)
}
