use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sie_cli::{run, Command, RunConfig, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "sie", version, about = "Cauchy singular integral equations and logarithmic potentials")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for solution.csv and summary.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Single-threaded, bit-reproducible run.
    #[arg(long)]
    serial: bool,
    /// Overrides the command's primary tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = RunConfig::load(&args.config).and_then(|cfg| {
        run(args.command, &cfg, &RunOptions { out: args.out.clone(), serial: args.serial, tol: args.tol })
    });
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sie: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
