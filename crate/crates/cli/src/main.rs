use std::process::ExitCode;

use clap::Parser;
use cyclovortex_cli::commands::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cyclovortex: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
