//! Binary entry point: environment handling, argument parsing, and the exit status
//! contract (0 success, 1 usage/validation, 2 data/format/I/O, 3 internal).

use clap::Parser;
use seqprint::cli::{self, Cli};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    // SEQPRINT_THREADS caps parallelism; absence means the library default.
    match std::env::var("SEQPRINT_THREADS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: cannot configure {n} worker threads: {e}");
                    return 3;
                }
            }
            _ => {
                eprintln!("error: SEQPRINT_THREADS must be a positive integer, got {raw:?}");
                return 1;
            }
        },
        Err(std::env::VarError::NotPresent) => {}
        Err(e) => {
            eprintln!("error: SEQPRINT_THREADS: {e}");
            return 1;
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let benign = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if benign { 0 } else { 1 };
        }
    };

    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| cli::run(cli))) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
        Err(_) => {
            // The panic hook has already printed the payload to stderr.
            eprintln!("error: internal failure");
            3
        }
    }
}
