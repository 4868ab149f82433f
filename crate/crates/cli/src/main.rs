use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sparsecol_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    // `run` drops the store (and its lock) before returning.
    let result = run(cli, &mut out, &mut err);
    let _ = out.flush();
    if let Err(e) = &result {
        let _ = writeln!(err, "error: {e:#}");
    }
    ExitCode::from(exit_code(&result) as u8)
}
