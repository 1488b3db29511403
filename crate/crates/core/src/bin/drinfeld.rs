//! Experiment driver. Reads a JSON config, runs one of the experiment
//! suites, writes an evidence record as JSON (and optionally CSV).
//!
//! Exit codes: 0 all assertions passed, 1 some assertion failed,
//! 2 configuration or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use drinfeld_core::config::ExperimentConfig;
use drinfeld_core::evidence::{self, EvidenceRecord};

#[derive(Parser)]
#[command(
    name = "drinfeld",
    about = "Exact experiments with Drinfeld modules and level structures over artinian local bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Write the evidence record as JSON here (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a flattened CSV, one row per case
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the base-ring cardinality bound
    #[arg(long)]
    max_card: Option<u64>,
    /// Worker threads for independent cases (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Division polynomials, point counts and torsion module structure
    Torsion(CommonArgs),
    /// Compare the per-prime and single-ideal level-structure definitions
    Equivalence(CommonArgs),
    /// Deformation class counts over artinian test rings
    Tangent(CommonArgs),
    /// Quotient isogenies and their exactness identities
    Isogeny(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Torsion(_) => "torsion",
            Command::Equivalence(_) => "equivalence",
            Command::Tangent(_) => "tangent",
            Command::Isogeny(_) => "isogeny",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Torsion(a)
            | Command::Equivalence(a)
            | Command::Tangent(a)
            | Command::Isogeny(a) => a,
        }
    }
}

fn run(cli: &Cli) -> Result<EvidenceRecord, String> {
    let args = cli.command.args();
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut cfg = ExperimentConfig::from_json(&text).map_err(|e| format!("config: {e}"))?;
    if let Some(cap) = args.max_card {
        cfg.bounds.enumeration = Some(cap);
    }
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    evidence::run(cli.command.name(), &cfg).map_err(|e| format!("run: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    let record = match run(&cli) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let json = record.to_json();
    let write_result = match &args.out {
        Some(path) => std::fs::write(path, json.as_bytes()),
        None => {
            println!("{json}");
            Ok(())
        }
    };
    if let Err(e) = write_result {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if let Some(path) = &args.csv {
        if let Err(e) = std::fs::write(path, evidence::to_csv(&record)) {
            eprintln!("error: cannot write csv: {e}");
            return ExitCode::from(2);
        }
    }
    if record.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
