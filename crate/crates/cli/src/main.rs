use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use torigid::{run, Cli, EXIT_ERROR};

fn configure_threads() {
    let Ok(raw) = std::env::var("TORIGID_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: cannot configure {n} threads: {e}");
            }
        }
        _ => eprintln!("warning: ignoring TORIGID_THREADS={raw:?}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(EXIT_ERROR as u8);
        }
        Err(e) => e.exit(),
    };
    configure_threads();
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.stdout.as_bytes());
            for d in &outcome.diagnostics {
                eprintln!("{d}");
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {message}", e.code());
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
