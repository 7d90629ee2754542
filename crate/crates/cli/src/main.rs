//! `fnpriv`: decide, synthesize and audit two-party protocols with
//! function-level privacy.
//!
//! Every subcommand prints one JSON document on stdout. Exit status is 0 for
//! an affirmative verdict, 1 for a negative one and 2 for usage or input
//! errors. `frontier`, `simulate` and `info` only report numbers and exit 0
//! on success.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "fnpriv",
    version,
    about = "Secure two-party computation with function-level privacy"
)]
pub struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide secure computability and synthesize a protocol.
    Analyze {
        #[arg(long)]
        triple: PathBuf,
        /// Write the synthesized protocol here (computable triples only).
        #[arg(long)]
        emit_protocol: Option<PathBuf>,
        /// Write a Graphviz rendering of the protocol here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a protocol's correctness and transcript privacy on both sides.
    Verify {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        protocol: PathBuf,
    },
    /// Conditional mutual information audit of a protocol.
    Claim1 {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// One-message perfect security under a distribution.
    Perfect {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, conflicts_with = "search", required_unless_present = "search")]
        channel: Option<PathBuf>,
        /// Search deterministic channels over all partitions of the sender's inputs.
        #[arg(long)]
        search: bool,
    },
    /// Exact eavesdropper leakage and error of a block protocol.
    Leakage {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Error/leakage frontier of deterministic non-interactive protocols.
    Frontier {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
        /// Also write the frontier as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare H(g(X,Y)) with I(X;Y).
    Omniscience {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        g_table: PathBuf,
    },
    /// Run the protocol on sampled inputs through two isolated endpoints.
    Simulate {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = fnpriv::privacy::DEFAULT_SEED)]
        seed: u64,
        /// Also write transcript frequencies as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Table of `g` for an empirical leakage estimate.
        #[arg(long)]
        g_table: Option<PathBuf>,
    },
    /// Entropies of f, g, h and I(X;Y) under a distribution.
    Info {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        dist: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct Sampling {
    /// Number of random full-support distributions to audit.
    #[arg(long, default_value_t = fnpriv::privacy::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = fnpriv::privacy::DEFAULT_SEED)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(outcome) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&outcome.report)
            } else {
                serde_json::to_string(&outcome.report)
            };
            println!("{}", text.expect("reports serialize"));
            ExitCode::from(if outcome.affirmative { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
