use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;

fn main() -> anyhow::Result<ExitCode> {
    let outcome = toricsod::cli::run(std::env::args_os());
    match &outcome.out {
        Some(path) if !outcome.stdout.is_empty() => std::fs::write(path, &outcome.stdout)
            .with_context(|| format!("writing {}", path.display()))?,
        _ => std::io::stdout().write_all(outcome.stdout.as_bytes())?,
    }
    std::io::stderr().write_all(outcome.stderr.as_bytes())?;
    Ok(ExitCode::from(outcome.code as u8))
}
