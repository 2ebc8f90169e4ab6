//! Command-line driver for the `despeckle` toolkit.

mod args;
mod commands;
mod error;
mod io;
mod settings;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, CliResult, EXIT_DATA, EXIT_NUMERIC, EXIT_USAGE};
pub use settings::Settings;

use args::Command;

fn dispatch(cli: &Cli) -> CliResult<()> {
    let s = Settings::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Speckle(c) => commands::speckle(c, s),
        Command::Despeckle(c) => commands::despeckle_cmd(c, s),
        Command::Metrics(c) => commands::metrics(c, s),
        Command::Bench(c) => commands::bench(c, s),
        Command::Convert(c) => commands::convert(c, s),
        Command::Phantom(c) => commands::phantom_cmd(c, s),
    }
}

#[cfg(feature = "parallel")]
fn with_threads(threads: Option<usize>, f: impl FnOnce() -> CliResult<()> + Send) -> CliResult<()> {
    match threads {
        None => f(),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads(threads: Option<usize>, f: impl FnOnce() -> CliResult<()>) -> CliResult<()> {
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        _ => f(),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    with_threads(cli.threads, || dispatch(cli))
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("despeckle: {e}");
            e.exit_code()
        }
    }
}
