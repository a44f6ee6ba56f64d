// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! `tickq`: timing-noise channels, fidelity budgets and cooling from the
//! command line.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 for usage or
//! input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "tickq",
    version,
    about = "Timing-noise channels, fidelity budgets and cooling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a timing-noise channel and dump it as JSON.
    Channel(ChannelArgs),
    /// Average gate fidelity of a mistimed gate.
    Fidelity(FidelityArgs),
    /// Circuit fidelity bound over gate counts and clock accuracies.
    Bound(BoundArgs),
    /// Clock accuracy needed to hold the circuit bound at a threshold.
    Budget(BudgetArgs),
    /// Simulate a CNOT circuit and compare its fidelity with the bound.
    CircuitSim(CircuitSimArgs),
    /// Cooling trajectory and cooling rate.
    Cooling(CoolingArgs),
    /// Run the oracle checks.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Qubit,
    Cnot,
    Swap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Dirac,
    Gaussian,
    Exponential,
    Comb,
    Empirical,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    dist: DistKind,
    /// Mean tick time [default: π].
    #[arg(long)]
    tau: Option<f64>,
    /// Gaussian spread; exclusive with --accuracy.
    #[arg(long, conflicts_with = "accuracy")]
    sigma: Option<f64>,
    /// Gaussian clock accuracy τ²/σ².
    #[arg(long)]
    accuracy: Option<f64>,
    /// Number of comb atoms.
    #[arg(long, default_value_t = 2)]
    comb_n: u32,
    /// Comb rate ε.
    #[arg(long, conflicts_with = "at_revival")]
    epsilon: Option<f64>,
    /// Pick ε so the gate's gap sits on the first comb revival.
    #[arg(long)]
    at_revival: bool,
    /// Two-column CSV of tick times and weights.
    #[arg(long)]
    ticks: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChannelArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "hamiltonian",
        required_unless_present = "hamiltonian"
    )]
    builtin: Option<Builtin>,
    /// JSON Hermitian matrix: rows of numbers or [re, im] pairs.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Qubit gap Ω.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[command(flatten)]
    dist: DistArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GateKind {
    Single,
    CnotSubspace,
    CnotFull,
}

#[derive(Args, Debug)]
pub struct FidelityArgs {
    #[arg(long, value_enum, default_value = "single")]
    gate: GateKind,
    /// Pulse area θ.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    theta: f64,
    /// Clock accuracy N (`inf` for a perfect clock).
    #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
    accuracy: Option<f64>,
    /// Dephasing magnitude Γ instead of θ and N.
    #[arg(long)]
    gamma: Option<f64>,
    /// Also estimate by Haar sampling with this many states.
    #[arg(long)]
    mc: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 20)]
    qubits: u32,
    /// Total CNOT counts L.
    #[arg(long, value_delimiter = ',', conflicts_with = "max_gates")]
    gates: Vec<u64>,
    /// Log-spaced L from 0 to this.
    #[arg(long)]
    max_gates: Option<u64>,
    #[arg(long, default_value_t = 10)]
    per_decade: u32,
    /// Clock accuracies N.
    #[arg(long, value_delimiter = ',', required = true)]
    accuracy: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    /// Qubit count [default: max(20, 2·largest l_t)].
    #[arg(long)]
    qubits: Option<u32>,
    /// CNOTs per layer l_t.
    #[arg(long, value_delimiter = ',', default_values_t = tickq_core::circuit::DEFAULT_LAYER_COUNTS)]
    layer_counts: Vec<u64>,
    /// Depths m.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["max_depth", "gates"])]
    depths: Vec<u64>,
    /// Log-spaced m up to this.
    #[arg(long, conflicts_with = "gates")]
    max_depth: Option<u64>,
    #[arg(long, default_value_t = 10)]
    per_decade: u32,
    /// One total gate count L (a single row with l_t = 1).
    #[arg(long)]
    gates: Option<u64>,
    #[arg(long, default_value_t = tickq_core::metrics::DEFAULT_FIDELITY_THRESHOLD)]
    threshold: f64,
    /// Gate duration in seconds; adds the timing uncertainty σ = τ/√N.
    #[arg(long)]
    tau: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CircuitSimArgs {
    /// Circuit JSON: {"n": .., "layers": [[[c, t], ..], ..]}.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    accuracy: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    shards: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoolingTable {
    Trajectory,
    Rate,
}

#[derive(Args, Debug)]
pub struct CoolingArgs {
    /// Cooling config JSON.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 100)]
    n_max: u64,
    /// Central-difference step h, overriding the config.
    #[arg(long)]
    rate: Option<f64>,
    /// Timer spreads for the rate table [default: the config's].
    #[arg(long, value_delimiter = ',')]
    sigmas: Vec<f64>,
    /// Table written in CSV mode; JSON holds both.
    #[arg(long, value_enum, default_value = "trajectory")]
    table: CoolingTable,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Channels,
    Fidelity,
    Unitarity,
    Cooling,
    All,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// How a command that ran to completion ended.
pub enum Outcome {
    Passed,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Channel(a) => commands::channel(a),
        Command::Fidelity(a) => commands::fidelity(a),
        Command::Bound(a) => commands::bound(a),
        Command::Budget(a) => commands::budget(a),
        Command::CircuitSim(a) => commands::circuit_sim(a),
        Command::Cooling(a) => commands::cooling(a),
        Command::Validate(a) => commands::validate(a),
    };
    match result {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
