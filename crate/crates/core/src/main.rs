use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use partact::cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.0);
            2
        }
    };
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::from(code as u8)
}
