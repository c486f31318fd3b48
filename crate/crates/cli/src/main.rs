// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! `pnd`: design, verify and simulate photon-number-dependent drives.
//!
//! ```text
//! pnd optimize --config opt.json --out results/
//! pnd verify   --config verify.json --out results/
//! pnd simulate --config sim.json --out results/ [--seed 7] [--threads 4]
//! ```
//!
//! Exit codes: 0 success, 1 usage/configuration/IO, 2 infeasible target,
//! 3 resonance or pole collision, 4 numerical tolerance or residual failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod custom;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pnd_core::PndError;

use crate::config::Loaded;
use crate::error::{CliError, CliResult};
use crate::output::{OutputDir, Provenance};

#[derive(Parser)]
#[command(name = "pnd", version, about = "Photon-number-dependent Hamiltonian engineering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search detunings and amplitudes for a target spectrum.
    Optimize(RunArgs),
    /// Evaluate a drive: engineered spectrum, excitation, dephasing, T_M.
    Verify(RunArgs),
    /// Run a time-domain experiment.
    Simulate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed stored in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: Cli) -> CliResult<()> {
    let (args, seed_path): (&RunArgs, Option<&[&str]>) = match &cli.command {
        Command::Optimize(a) => (a, Some(&["optimizer", "seed"])),
        Command::Verify(a) => (a, None),
        Command::Simulate(a) => (a, Some(&["seed"])),
    };
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let mut loaded = Loaded::read(&args.config)?;
    match (args.seed, seed_path) {
        (Some(seed), Some(path)) => loaded.set_seed(path, seed),
        (Some(_), None) => eprintln!("note: verify is deterministic; --seed ignored"),
        _ => {}
    }
    let out = OutputDir::create(&args.out, Provenance::of(&loaded.value))?;
    match cli.command {
        Command::Optimize(_) => commands::optimize(&loaded, &out),
        Command::Verify(_) => commands::verify(&loaded, &out),
        Command::Simulate(_) => commands::simulate(&loaded, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(PndError::NoFeasibleAssignment { failures, .. }) = &e {
                for f in failures {
                    eprintln!("  {f}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
