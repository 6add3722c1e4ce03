use std::process::ExitCode;

use clap::Parser;
use isa_cli::error::{EXIT_CONFIG, EXIT_OK};
use isa_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help, --version
                let _ = e.print();
                return ExitCode::from(EXIT_OK as u8);
            }
            let err = CliError::Config(e.to_string().trim_end().to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
