use std::io::Write;
use std::process::ExitCode;

use trigona_cli::{run, FileSystem, EXIT_INPUT, SEED_ENV};

fn main() -> ExitCode {
    let env_seed = std::env::var(SEED_ENV).ok();
    let outcome = run(std::env::args_os(), env_seed.as_deref(), &mut FileSystem);
    let text = outcome.report.as_str();
    let written = if outcome.code == EXIT_INPUT && !text.starts_with('{') {
        std::io::stderr().write_all(text.as_bytes())
    } else {
        std::io::stdout().write_all(text.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(74);
    }
    ExitCode::from(outcome.code as u8)
}
