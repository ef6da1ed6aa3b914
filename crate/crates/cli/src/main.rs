//! `uniclass`: batch verification of displacement spectra, kangaroo
//! properties and diagrams on small finite buildings.
//!
//! Exit status: 0 when every check passes, 1 on a verification failure,
//! 2 on usage, configuration or budget errors.

mod commands;
mod config;
mod zoo;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "uniclass", version, about = "Displacement spectra and kangaroo checks on finite buildings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// INI run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// exhaustive | sample
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Chambers drawn in sample mode.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write machine-readable output here ("-" for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true)]
    cap_chambers: Option<u64>,
    #[arg(long, global = true)]
    cap_group: Option<u64>,
    /// Geometry such as PG(3,2), HQ(4,2), PQ(3,3); repeat for theorem-a.
    #[arg(long, global = true)]
    geometry: Vec<String>,
    /// Constructor name, `random#SEED`, or set via [automorphism].
    #[arg(long = "auto", global = true)]
    automorphism: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Full displacement report for one automorphism.
    Spectrum,
    /// Sweep automorphisms and compare uniclass with {1,2'}-kangaroo.
    TheoremA {
        /// Random maps added to the zoo when the group is too large.
        #[arg(long)]
        random_autos: Option<usize>,
    },
    /// Run every constructor against its expected row.
    Zoo,
    /// Classify {2,2'}-kangaroos (default PG(2,2), whole group).
    #[command(name = "classify-22p")]
    Classify22p,
    /// Fix and opposition diagrams, cross-checked on vertices.
    Diagram,
    /// Compare relative positions with chamber-graph distances.
    OracleCheck {
        /// Random pairs for graphs too large for all pairs.
        #[arg(long)]
        pairs: Option<usize>,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let c = cli.common;
    let overrides = Overrides {
        config: c.config,
        mode: c.mode,
        samples: c.samples,
        seed: c.seed,
        json: c.json,
        cap_chambers: c.cap_chambers,
        cap_group: c.cap_group,
        geometry: c.geometry,
        automorphism: c.automorphism,
    };
    let mut cfg = RunConfig::resolve(&overrides)?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::TheoremA { random_autos } => {
            if let Some(n) = random_autos {
                cfg.random_autos = n;
            }
            commands::theorem_a(&cfg)
        }
        Command::Zoo => commands::zoo(&cfg),
        Command::Classify22p => commands::classify_22p(&cfg),
        Command::Diagram => commands::diagram(&cfg),
        Command::OracleCheck { pairs } => {
            if let Some(p) = pairs {
                cfg.pairs = p;
            }
            commands::oracle_check(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
