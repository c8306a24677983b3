use std::process::ExitCode;

use clap::Parser;
use specshare_cli::{args::Cli, run, threads_from_env, Failure};

fn configure_threads() -> Result<(), Failure> {
    let value = std::env::var("SPECSHARE_THREADS").ok();
    if let Some(n) = threads_from_env(value.as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.into()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let mut out = std::io::stdout().lock();
        let mut err = std::io::stderr();
        run(&cli, &mut out, &mut err)
    });
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
