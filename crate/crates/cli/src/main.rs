use std::io::Write;
use std::process::ExitCode;

use cdga_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli, &mut std::io::stdin().lock());
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.to_text().as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(out.exit_code as u8)
}
