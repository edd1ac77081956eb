//! `secfan` — exact-arithmetic workbench for secondary fans, wall
//! crossings, monotone paths and homotopy transfer.

use clap::Parser;
use secfan_cli::{run_command, Opts};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "secfan",
    about = "Exact workbench: secondary fans, wall crossings, monotone paths, A-infinity transfer",
    after_help = "Subcommands: circuits, triangulations, secondary, walls, run, nef-fano, sod,\n\
                  collection, paths, radar, match, ainfty, verify-example.\n\
                  Exit codes: 0 success, 2 validation error, 3 engine error, 4 verification mismatch."
)]
struct Cli {
    /// Subcommand to run (see --help for the list).
    subcommand: String,
    /// Input file in the documented plain-text format.
    input: std::path::PathBuf,
    /// Twist choices for decompositions (repeat for per-wall values).
    #[arg(long = "d", value_name = "TWIST", allow_hyphen_values = true, num_args = 1..)]
    d: Vec<i64>,
    /// Highest product arity for `ainfty` (default 4).
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    /// Apply the documented deterministic perturbation when a segment is
    /// non-generic (never applied implicitly).
    #[arg(long)]
    perturb: bool,
    /// Start chamber id (run, sod, collection).
    #[arg(long)]
    start: Option<usize>,
    /// Target chamber id (run, nef-fano).
    #[arg(long)]
    target: Option<usize>,
    /// Path index (radar, match).
    #[arg(long)]
    path: Option<usize>,
    /// Worker count; accepted for compatibility, output is unaffected.
    #[arg(long)]
    #[allow(unused)]
    jobs: Option<usize>,
    /// Print wall-clock timing to stderr (stdout stays deterministic).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("validation error: cannot read {}: {e}", cli.input.display());
            return ExitCode::from(2);
        }
    };
    let opts = Opts {
        d: cli.d,
        nmax: cli.nmax,
        perturb: cli.perturb,
        start: cli.start,
        target: cli.target,
        path: cli.path,
    };
    let started = std::time::Instant::now();
    let result = run_command(&cli.subcommand, &text, &opts);
    if cli.timing {
        eprintln!("elapsed: {:?}", started.elapsed());
    }
    match result {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            let code = u8::try_from(e.exit_code()).unwrap_or(1);
            ExitCode::from(code)
        }
    }
}
