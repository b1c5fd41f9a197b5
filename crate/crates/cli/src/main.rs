use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sepmon::cli::{self, Command, JobConfig};
use sepmon::input::Caps;

/// Separating sets of invariant monomials: atoms, verdicts, certificates.
#[derive(Parser, Debug)]
#[command(name = "sepmon", version)]
struct Args {
    /// atoms | check-sep | beta | beta-sep | tau | minimize | realize | stats | general-sep | oracle
    #[arg(value_parser = parse_command)]
    command: Command,

    /// Input JSON file; stdin when omitted or "-".
    input: Option<PathBuf>,

    /// Characteristic (0 or a prime); overrides "p" in the input.
    #[arg(long = "char")]
    characteristic: Option<u64>,

    /// Maximum frontier size during atom computation.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_frontier: Option<u64>,

    /// Maximum atom degree explored.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_degree: Option<u64>,

    /// Use the conjectured support bound; results are marked conditional.
    #[arg(long)]
    unsafe_conjectural_bound: bool,

    /// Use all cores (same output as single-threaded).
    #[arg(long)]
    parallel: bool,

    /// Worker threads; implies --parallel.
    #[arg(long)]
    threads: Option<usize>,

    /// Re-run the brute-force oracle and report agreement.
    #[arg(long)]
    oracle_crosscheck: bool,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse()
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match args.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map(|_| buf)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            println!(
                "{}",
                serde_json::json!({ "error": { "kind": "io", "message": e.to_string() } })
            );
            return ExitCode::from(cli::EXIT_INPUT as u8);
        }
    };
    let threads = match (args.threads, args.parallel) {
        (Some(t), _) => t.max(1),
        (None, true) => 0,
        (None, false) => 1,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let config = JobConfig {
        command: args.command,
        characteristic: args.characteristic,
        caps: Caps {
            frontier: args.max_frontier.map(|f| usize::try_from(f).unwrap_or(usize::MAX)),
            degree: args.max_degree,
        },
        unsafe_conjectural_bound: args.unsafe_conjectural_bound,
        oracle_crosscheck: args.oracle_crosscheck,
    };
    let (code, out) = pool.install(|| cli::run(&config, &text));
    println!("{out}");
    ExitCode::from(code as u8)
}
