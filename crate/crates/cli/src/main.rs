use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use ducci_cli::commands::{run, Cli, Io};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = match run(
        &cli,
        &mut Io {
            out: &mut out,
            err: &mut err,
        },
    ) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
