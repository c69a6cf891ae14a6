use std::process::ExitCode;

use clap::Parser;
use keygraph_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("keygraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
