use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use landscape_cli::cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match landscape_cli::run_command(&cli.command) {
        Ok(report) => {
            for f in &report.files {
                eprintln!("wrote {}", f.display());
            }
            eprintln!("{}", report.budget);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
