use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wittkit::harness::{run_suite, HarnessError, RunConfig, Suite};

/// Runs the wittkit verification suites and writes a canonical JSON report.
#[derive(Parser, Debug)]
#[command(name = "wittkit", version, about)]
struct Args {
    /// Odd prime.
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Witt length / level of the Weyl algebra.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Bernstein degree window; defaults depend on the suite.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Total weight bound for de Rham-Witt pieces.
    #[arg(long, default_value_t = 3)]
    max_weight: u64,
    /// witt-axioms, hkr, theorem1, theorem2-centers, lemma-identities,
    /// sv-identity, illusie, cartier-tau, delta-exponent or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Persistent cache directory; caching is off when unset.
    #[arg(long, env = "WITTKIT_CACHE")]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn run(args: Args) -> Result<bool, HarnessError> {
    let cfg = RunConfig {
        p: args.p,
        n: args.n,
        max_degree: args.max_degree,
        max_weight: args.max_weight,
        suite: args.suite.parse::<Suite>()?,
        cache_dir: args.cache_dir,
        out: args.out,
        seed: args.seed,
        jobs: args.jobs,
    };
    let report = run_suite(&cfg)?;
    print!("{}", report.summary_table());
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("wittkit: {e}");
            ExitCode::from(2)
        }
    }
}
