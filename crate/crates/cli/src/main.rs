//! `qsl`: search, convert and verify spread and avsp certificates.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            eprintln!("{}", serde_json::json!({ "error": msg.trim() }));
            return ExitCode::from(commands::EXIT_USAGE);
        }
    };
    ExitCode::from(commands::run(cli))
}
