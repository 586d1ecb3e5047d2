//! `twistcolor`: command-line driver for biquandle colorings of twisted diagrams.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or parse error, 3 a
//! resource cap was hit.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistcolor_core::moves::MoveFamily;

use commands::{Failure, MakeKind, Outcome};
use config::{Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "twistcolor", version, about = "Biquandle colorings of virtual and twisted link diagrams")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE", env = "TWISTCOLOR_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, env = "TWISTCOLOR_FORMAT")]
    format: Option<Format>,
    /// Seed for randomized runs; echoed in their output.
    #[arg(long, global = true, env = "TWISTCOLOR_SEED")]
    seed: Option<u64>,
    /// Maximum search nodes for the coloring solver.
    #[arg(long, global = true, env = "TWISTCOLOR_NODE_BUDGET")]
    node_budget: Option<u64>,
    /// Maximum assignments for the brute-force oracle.
    #[arg(long, global = true, env = "TWISTCOLOR_BRUTE_FORCE_CAP")]
    brute_force_cap: Option<u64>,
    /// Largest carrier for exhaustive automorphism search.
    #[arg(long, global = true, env = "TWISTCOLOR_AUTOMORPHISM_CAP")]
    automorphism_cap: Option<usize>,
    /// Accept structures that fail their axioms.
    #[arg(long, global = true, env = "TWISTCOLOR_NO_VERIFY")]
    no_verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every axiom on a structure file.
    Check { file: PathBuf },
    /// Write a structure file.
    Make {
        #[command(subcommand)]
        kind: MakeKind,
        /// Write to FILE instead of stdout.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// List the automorphisms of a biquandle (or derived biquandle of a quandle).
    Automorphisms { file: PathBuf },
    /// Count colorings of a diagram (`-` reads stdin) by a vt or quandle file.
    Color {
        diagram: PathBuf,
        structure: PathBuf,
        /// List every coloring.
        #[arg(long)]
        emit: bool,
        /// Count even if the structure fails its axioms.
        #[arg(long)]
        force: bool,
    },
    /// Print the non-orientable virtual m-foil diagram.
    Fm { m: usize },
    /// Pairs (a, b) with a = a^{(ba)^m} and b = b^{(ab)^m}.
    Delta { quandle: PathBuf, m: usize },
    /// Test whether B(Q)-colorings prove a diagram is not virtual.
    Detect { diagram: PathBuf, quandle: PathBuf },
    /// Check every extended Reidemeister move against a structure.
    Moves {
        structure: PathBuf,
        /// Restrict to these families (repeatable).
        #[arg(long = "family")]
        families: Vec<MoveFamily>,
    },
    /// Closed-form twisted Jones polynomial of the m-foil.
    JonesFm { m: usize },
    /// Apply seeded random local moves and compare coloring counts.
    Invariance {
        diagram: PathBuf,
        structure: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn run(cli: &Cli, config: &RunConfig) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { file } => commands::check(file),
        Command::Make { kind, output } => commands::make(kind, output.as_deref()),
        Command::Automorphisms { file } => commands::automorphisms(file, config),
        Command::Color { diagram, structure, emit, force } => commands::color(diagram, structure, *emit, *force, config),
        Command::Fm { m } => commands::fm(*m),
        Command::Delta { quandle, m } => commands::delta(quandle, *m),
        Command::Detect { diagram, quandle } => commands::detect(diagram, quandle, config),
        Command::Moves { structure, families } => commands::moves(structure, families, config),
        Command::JonesFm { m } => commands::jones_fm(*m),
        Command::Invariance { diagram, structure, trials } => commands::invariance(diagram, structure, *trials, config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        node_budget: cli.node_budget,
        brute_force_cap: cli.brute_force_cap,
        automorphism_cap: cli.automorphism_cap,
        verify: cli.no_verify.then_some(false),
        format: cli.format,
        seed: cli.seed,
    };
    let config = match RunConfig::load(cli.config.as_deref(), &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    };
    match run(&cli, &config) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(config.format).as_bytes());
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
