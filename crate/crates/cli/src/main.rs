use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rrfilt_cli::{analyze, parse_input, summary, Overrides, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "rrfilt", version, about = "Ratliff-Rush filtrations of m-primary ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the ideal described in FILE.
    Analyze {
        file: PathBuf,
        /// Comma-separated checks; an empty list only echoes the input.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        checks: Option<Vec<String>>,
        #[arg(long)]
        max_power: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        /// Confirmation window of the certificate searches.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        assume_integrally_closed: bool,
        /// Write the JSON report here and print a summary instead.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Analyze { file, checks, max_power, max_n, window, trials, seed, assume_integrally_closed, json } =
        Cli::parse().command;
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let overrides = Overrides { checks, max_power, max_n, window, trials, seed, assume_integrally_closed };
    let req = parse_input(&text).and_then(|mut r| r.apply(&overrides).map(|_| r));
    let req = match req {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let cache = std::env::var_os(rrfilt_cli::cache::CACHE_ENV).map(PathBuf::from);
    let (rendered, code) = match analyze(&req, cache.as_deref()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match json {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &rendered) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
            let doc: serde_json::Value = serde_json::from_str(&rendered).expect("rendered JSON parses");
            print!("{}", summary(&doc));
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(code as u8)
}
