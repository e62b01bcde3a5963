use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spectral_branch::config::parse_config;
use spectral_branch::run::run;

/// Tracks differentiable eigenvalue branches of Hermitian matrix families.
#[derive(Debug, Parser)]
#[command(name = "spectral-branch", version)]
struct Args {
    /// Run configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory for the CSV, plot-data and report files.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Progress messages on stderr.
    #[arg(long)]
    verbose: bool,
}

/// Worker cap from `SPECTRAL_BRANCH_THREADS`, if set to a positive integer.
fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var("SPECTRAL_BRANCH_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("SPECTRAL_BRANCH_THREADS must be a positive integer, found `{v}`")),
        },
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match thread_cap() {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    match run(&cfg, &args.out, args.verbose) {
        Ok(summary) => {
            if args.verbose {
                eprint!("{}", summary.report);
            }
            println!("{}", summary.csv.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
