use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use walker_cli::{run, Cli, EXIT_INTERNAL, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let code = match run(cli, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("walker: {e}");
            e.exit_code()
        }
    };
    if stdout.flush().is_err() {
        return ExitCode::from(EXIT_INTERNAL as u8);
    }
    ExitCode::from(code as u8)
}
