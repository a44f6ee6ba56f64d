// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

use std::error::Error as StdError;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use tickq_core::channels::{apply_kraus, ChannelDump, DephasedGateChannel, NamedGate};
use tickq_core::circuit::{
    budget_table, empirical_average_fidelity_sharded, log_grid, BudgetRow, CircuitSpec,
};
use tickq_core::cooling::{rate_table, trajectory, CoolingConfig, RateRow, TrajectoryRow};
use tickq_core::metrics::{
    circuit_fidelity_bound, cnot_fullspace_fidelity, haar_average_fidelity_sharded,
    qubit_dephasing_fidelity, timing_uncertainty,
};
use tickq_core::qcore::{hermitian_eigendecomposition, ComplexMatrix, SpectralHamiltonian};
use tickq_core::validate::{self, Suite};
use tickq_core::{build_channel, TickDistribution};

use crate::output::{write_csv, write_json};
use crate::{
    BoundArgs, BudgetArgs, Builtin, ChannelArgs, CircuitSimArgs, CoolingArgs, CoolingTable,
    DistArgs, DistKind, FidelityArgs, Format, GateKind, Outcome, OutputArgs, SuiteArg,
    ValidateArgs,
};

type CmdResult = Result<Outcome, Box<dyn StdError>>;

const SHARDS: usize = 8;
const AGREEMENT_SIGMAS: f64 = 3.0;

fn usage(msg: impl Into<String>) -> Box<dyn StdError> {
    msg.into().into()
}

fn format_or(output: &OutputArgs, default: Format) -> Format {
    output.format.unwrap_or(default)
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Outcome::Passed
    } else {
        Outcome::Failed
    }
}

fn pass_fail(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Hamiltonian file entries: a real number or an `[re, im]` pair.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

fn load_hamiltonian(path: &std::path::Path) -> Result<SpectralHamiltonian, Box<dyn StdError>> {
    let rows: Vec<Vec<Entry>> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(usage(format!(
            "{}: Hamiltonian must be a square matrix",
            path.display()
        )));
    }
    let data = rows
        .into_iter()
        .flatten()
        .map(|e| match e {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        })
        .collect();
    Ok(hermitian_eigendecomposition(
        &ComplexMatrix::from_row_major(data)?,
    )?)
}

fn distribution(args: &DistArgs, gap: Option<f64>) -> Result<TickDistribution, Box<dyn StdError>> {
    let tau = args.tau.unwrap_or(PI);
    Ok(match args.dist {
        DistKind::Dirac => TickDistribution::dirac(tau)?,
        DistKind::Gaussian => match (args.sigma, args.accuracy) {
            (Some(sigma), _) => TickDistribution::gaussian(tau, sigma)?,
            (None, Some(n)) if n.is_infinite() => TickDistribution::dirac(tau)?,
            (None, Some(n)) => TickDistribution::gaussian_with_accuracy(tau, n)?,
            (None, None) => return Err(usage("gaussian timer needs --sigma or --accuracy")),
        },
        DistKind::Exponential => TickDistribution::exponential(tau)?,
        DistKind::Comb => {
            let epsilon = match (args.epsilon, args.at_revival) {
                (Some(e), _) => e,
                (None, true) => {
                    let gap = gap.ok_or_else(|| usage("--at-revival needs a builtin gate"))?;
                    gap / (2.0 * PI * f64::from(args.comb_n))
                }
                (None, false) => return Err(usage("comb timer needs --epsilon or --at-revival")),
            };
            TickDistribution::comb(args.comb_n, epsilon)?
        }
        DistKind::Empirical => {
            let path = args
                .ticks
                .as_ref()
                .ok_or_else(|| usage("empirical timer needs --ticks"))?;
            TickDistribution::from_csv_path(path)?
        }
    })
}

pub fn channel(args: ChannelArgs) -> CmdResult {
    if format_or(&args.output, Format::Json) != Format::Json {
        return Err(usage("channel dumps are JSON only"));
    }
    let (generator, gap) = match (args.builtin, &args.hamiltonian) {
        (Some(b), _) => {
            let gate = match b {
                Builtin::Qubit => NamedGate::Qubit { omega: args.omega },
                Builtin::Cnot => NamedGate::Cnot,
                Builtin::Swap => NamedGate::Swap,
            };
            (gate.generator(), Some(gate.gap()))
        }
        (None, Some(path)) => (load_hamiltonian(path)?, None),
        (None, None) => return Err(usage("give --builtin or --hamiltonian")),
    };
    let dist = distribution(&args.dist, gap)?;
    let dump = build_channel(&generator, &dist).to_dump();
    write_json(&dump, args.output.out.as_deref())?;

    let reloaded: ChannelDump = serde_json::from_str(&serde_json::to_string(&dump)?)?;
    let ok = DephasedGateChannel::from_dump(&reloaded).and_then(|ch| ch.is_cptp());
    match ok {
        Ok(true) => Ok(Outcome::Passed),
        Ok(false) | Err(_) => {
            eprintln!("FAIL channel dump does not reload as a CPTP map");
            Ok(Outcome::Failed)
        }
    }
}

#[derive(Serialize)]
struct FidelityOut {
    gate: &'static str,
    theta: Option<f64>,
    accuracy: Option<f64>,
    gamma: f64,
    closed_form: f64,
    mc_samples: Option<usize>,
    mc_value: Option<f64>,
    mc_standard_error: Option<f64>,
    mc_passed: Option<bool>,
}

pub fn fidelity(args: FidelityArgs) -> CmdResult {
    let gamma = match (args.gamma, args.accuracy) {
        (Some(g), _) => g,
        (None, Some(n)) if n > 0.0 => args.theta * args.theta / (2.0 * n),
        (None, Some(n)) => return Err(usage(format!("accuracy must be > 0, got {n}"))),
        (None, None) => return Err(usage("give --accuracy or --gamma")),
    };
    let (name, closed_form) = match args.gate {
        GateKind::Single => ("single", qubit_dephasing_fidelity(gamma)?),
        GateKind::CnotSubspace => ("cnot-subspace", qubit_dephasing_fidelity(gamma)?),
        GateKind::CnotFull => ("cnot-full", cnot_fullspace_fidelity(gamma)?),
    };
    let mut out = FidelityOut {
        gate: name,
        theta: args.accuracy.map(|_| args.theta),
        accuracy: args.accuracy,
        gamma,
        closed_form,
        mc_samples: None,
        mc_value: None,
        mc_standard_error: None,
        mc_passed: None,
    };
    if let Some(samples) = args.mc {
        let seed = args.seed.ok_or_else(|| usage("--mc needs --seed"))?;
        let report = fidelity_estimate(&args, gamma, samples, seed)?;
        let se = report.standard_error().unwrap_or(0.0);
        let passed = (report.value() - closed_form).abs() <= AGREEMENT_SIGMAS * se + 1e-12;
        eprintln!(
            "{} closed form {closed_form:.6} vs Haar {:.6} ± {se:.2e}",
            pass_fail(passed),
            report.value()
        );
        out.mc_samples = Some(samples);
        out.mc_value = Some(report.value());
        out.mc_standard_error = Some(se);
        out.mc_passed = Some(passed);
    }
    match format_or(&args.output, Format::Json) {
        Format::Json => write_json(&out, args.output.out.as_deref())?,
        Format::Csv => write_csv(
            &[
                "gate",
                "theta",
                "accuracy",
                "gamma",
                "closed_form",
                "mc_samples",
                "mc_value",
                "mc_standard_error",
                "mc_passed",
            ],
            std::slice::from_ref(&out),
            args.output.out.as_deref(),
        )?,
    }
    Ok(verdict(out.mc_passed.unwrap_or(true)))
}

/// Haar estimate through the timer's spectral channel when `θ, N` are given,
/// otherwise through the dephasing Kraus pair for `Γ`.
fn fidelity_estimate(
    args: &FidelityArgs,
    gamma: f64,
    samples: usize,
    seed: u64,
) -> Result<tickq_core::FidelityReport, Box<dyn StdError>> {
    let subspace: Option<Vec<Vec<C64>>> = (args.gate == GateKind::CnotSubspace).then(|| {
        [2usize, 3]
            .iter()
            .map(|&i| {
                (0..4)
                    .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect()
    });
    let gate = match args.gate {
        GateKind::Single => NamedGate::Qubit { omega: 1.0 },
        GateKind::CnotSubspace | GateKind::CnotFull => NamedGate::Cnot,
    };
    if let Some(n) = args.accuracy {
        // unit gap, so the mean tick θ is the pulse area
        let dist = if n.is_infinite() {
            TickDistribution::dirac(args.theta)?
        } else {
            TickDistribution::gaussian_with_accuracy(args.theta, n)?
        };
        let ch = build_channel(&gate.generator(), &dist);
        Ok(haar_average_fidelity_sharded(
            &ch.ideal_unitary(),
            |r| ch.apply(r),
            subspace.as_deref(),
            samples,
            seed,
            SHARDS,
        )?)
    } else {
        let kraus = gate.dephasing_kraus(gamma)?;
        let dim = kraus[0].dim();
        Ok(haar_average_fidelity_sharded(
            &ComplexMatrix::identity(dim),
            |r| apply_kraus(&kraus, r),
            subspace.as_deref(),
            samples,
            seed,
            SHARDS,
        )?)
    }
}

pub fn bound(args: BoundArgs) -> CmdResult {
    let gates = match args.max_gates {
        Some(max) => log_grid(max, args.per_decade),
        None if !args.gates.is_empty() => args.gates.clone(),
        None => return Err(usage("give --gates or --max-gates")),
    };
    let rows = tickq_core::circuit::bound_table(args.qubits, &gates, &args.accuracy)?;
    match format_or(&args.output, Format::Csv) {
        Format::Csv => write_csv(&["L", "N", "bound"], &rows, args.output.out.as_deref())?,
        Format::Json => write_json(&rows, args.output.out.as_deref())?,
    }
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct BudgetTimedRow {
    m: u64,
    l_t: u64,
    #[serde(rename = "required_N")]
    required_accuracy: f64,
    sigma: f64,
}

pub fn budget(args: BudgetArgs) -> CmdResult {
    let (layer_counts, depths) = match (args.gates, args.max_depth) {
        (Some(l), _) => (vec![1], vec![l]),
        (None, Some(max)) => (args.layer_counts.clone(), log_grid(max, args.per_decade)),
        (None, None) if !args.depths.is_empty() => (args.layer_counts.clone(), args.depths.clone()),
        (None, None) => return Err(usage("give --depths, --max-depth or --gates")),
    };
    let widest = layer_counts.iter().copied().max().unwrap_or(1);
    let qubits = match args.qubits {
        Some(n) => n,
        None => u32::try_from((2 * widest).max(20)).map_err(|_| usage("layer count too large"))?,
    };
    let rows: Vec<BudgetRow> = budget_table(qubits, &layer_counts, &depths, args.threshold)?;
    let out = args.output.out.as_deref();
    let format = format_or(&args.output, Format::Csv);
    match args.tau {
        None => match format {
            Format::Csv => write_csv(&["m", "l_t", "required_N"], &rows, out)?,
            Format::Json => write_json(&rows, out)?,
        },
        Some(tau) => {
            let timed = rows
                .iter()
                .map(|r| {
                    let sigma = if r.required_accuracy == 0.0 {
                        f64::INFINITY
                    } else {
                        timing_uncertainty(tau, r.required_accuracy)?
                    };
                    Ok(BudgetTimedRow {
                        m: r.m,
                        l_t: r.l_t,
                        required_accuracy: r.required_accuracy,
                        sigma,
                    })
                })
                .collect::<tickq_core::Result<Vec<_>>>()?;
            match format {
                Format::Csv => write_csv(&["m", "l_t", "required_N", "sigma"], &timed, out)?,
                Format::Json => write_json(&timed, out)?,
            }
        }
    }
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct CircuitSimOut {
    qubits: usize,
    gates: u64,
    depth: usize,
    accuracy: f64,
    samples: usize,
    seed: u64,
    estimate: f64,
    standard_error: f64,
    bound: f64,
    passed: bool,
}

pub fn circuit_sim(args: CircuitSimArgs) -> CmdResult {
    let spec = CircuitSpec::from_path(&args.spec)?;
    let report = empirical_average_fidelity_sharded(
        &spec,
        args.accuracy,
        args.samples,
        args.seed,
        args.shards,
    )?;
    let se = report.standard_error().unwrap_or(0.0);
    let bound = circuit_fidelity_bound(spec.qubits() as u32, spec.total_gates(), args.accuracy)?;
    let passed = report.value() <= bound + AGREEMENT_SIGMAS * se;
    let out = CircuitSimOut {
        qubits: spec.qubits(),
        gates: spec.total_gates(),
        depth: spec.depth(),
        accuracy: args.accuracy,
        samples: args.samples,
        seed: args.seed,
        estimate: report.value(),
        standard_error: se,
        bound,
        passed,
    };
    eprintln!(
        "{} estimate {:.6} ± {se:.2e}, bound {bound:.6}",
        pass_fail(passed),
        report.value()
    );
    match format_or(&args.output, Format::Json) {
        Format::Json => write_json(&out, args.output.out.as_deref())?,
        Format::Csv => write_csv(
            &[
                "qubits",
                "gates",
                "depth",
                "accuracy",
                "samples",
                "seed",
                "estimate",
                "standard_error",
                "bound",
                "passed",
            ],
            &[out],
            args.output.out.as_deref(),
        )?,
    }
    Ok(verdict(passed))
}

#[derive(Serialize)]
struct CoolingOut {
    config: CoolingConfig,
    final_r: f64,
    trajectory: Vec<TrajectoryRow>,
    rates: Vec<RateRow>,
}

pub fn cooling(args: CoolingArgs) -> CmdResult {
    let mut config = CoolingConfig::from_path(&args.config)?;
    if let Some(h) = args.rate {
        config = config.with_step(h)?;
    }
    let sigmas = if args.sigmas.is_empty() {
        vec![config.sigma()]
    } else {
        args.sigmas.clone()
    };
    let traj = trajectory(&config, args.n_max);
    let rates = rate_table(&config, &sigmas, args.n_max)?;
    let final_r = traj.last().map_or(config.r_s(), |row| row.r);
    eprintln!(
        "final r = {final_r:.12} after {} steps (r_v - r = {:.3e})",
        args.n_max,
        config.r_v() - final_r
    );
    let out = args.output.out.as_deref();
    match format_or(&args.output, Format::Csv) {
        Format::Csv => match args.table {
            CoolingTable::Trajectory => write_csv(&["n", "r"], &traj, out)?,
            CoolingTable::Rate => write_csv(&["sigma", "n", "rate"], &rates, out)?,
        },
        Format::Json => write_json(
            &CoolingOut {
                config,
                final_r,
                trajectory: traj,
                rates,
            },
            out,
        )?,
    }
    Ok(Outcome::Passed)
}

pub fn validate(args: ValidateArgs) -> CmdResult {
    let suite = match args.suite {
        SuiteArg::Channels => Suite::Channels,
        SuiteArg::Fidelity => Suite::Fidelity,
        SuiteArg::Unitarity => Suite::Unitarity,
        SuiteArg::Cooling => Suite::Cooling,
        SuiteArg::All => Suite::All,
    };
    let report = validate::run(suite, args.seed)?;
    for check in report.checks() {
        eprintln!(
            "{} {} = {:e}",
            pass_fail(check.passed),
            check.name,
            check.value
        );
    }
    write_json(&report, args.out.as_deref())?;
    Ok(verdict(report.passed))
}
