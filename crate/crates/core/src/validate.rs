// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Oracle battery comparing every closed form against an independent
//! evaluation. Reports are deterministic for a given seed.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channels::{
    apply_kraus, build_channel, cnot_dephasing_kraus, monte_carlo_average_sharded,
    qubit_dephasing_kraus, NamedGate,
};
use crate::circuit::{circuit_kraus_operators, CircuitSpec};
use crate::cooling::{
    cooling_rate, cooling_step_full_sim, ground_population_after_n, swap_error_probability,
    swap_error_probability_for_timer, CoolingConfig, ThermalQubit, SIGMA_INFINITY_PROXY,
};
use crate::error::{Error, Result};
use crate::metrics::{
    average_gate_fidelity_from_kraus, bound_from_upsilon, circuit_fidelity_bound,
    circuit_unitarity_gamma, cnot_fullspace_fidelity, haar_average_fidelity_sharded,
    qubit_dephasing_fidelity, required_accuracy, single_gate_fidelity, timing_uncertainty,
    unitarity_from_kraus, FidelityReport,
};
use crate::qcore::{haar_random_state, trace_distance, ComplexMatrix, DensityMatrix, PureState};
use crate::rng::{seeded, sub_seed};
use crate::ticks::TickDistribution;

pub const DEFAULT_SEED: u64 = 42;
const SHARDS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Channels,
    Fidelity,
    Unitarity,
    Cooling,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Channels,
                Suite::Fidelity,
                Suite::Unitarity,
                Suite::Cooling,
            ],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Channels => "channels",
            Suite::Fidelity => "fidelity",
            Suite::Unitarity => "unitarity",
            Suite::Cooling => "cooling",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Suite::Channels,
            Suite::Fidelity,
            Suite::Unitarity,
            Suite::Cooling,
            Suite::All,
        ]
        .into_iter()
        .find(|suite| suite.name() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tolerance {
    AtMost(f64),
    AtLeast(f64),
    Within([f64; 2]),
}

impl Tolerance {
    fn admits(self, value: f64) -> bool {
        match self {
            Tolerance::AtMost(t) => value <= t,
            Tolerance::AtLeast(t) => value >= t,
            Tolerance::Within([lo, hi]) => (lo..=hi).contains(&value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: Tolerance,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: Tolerance) -> Self {
        Self {
            name: name.into(),
            passed: tolerance.admits(value),
            value,
            tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks().filter(|c| !c.passed)
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<ValidationReport> {
    let suites = suite
        .members()
        .into_iter()
        .map(|s| {
            let checks = match s {
                Suite::Channels => channels_suite(seed)?,
                Suite::Fidelity => fidelity_suite(seed)?,
                Suite::Unitarity => unitarity_suite()?,
                Suite::Cooling => cooling_suite()?,
                Suite::All => unreachable!("expanded by members()"),
            };
            Ok(SuiteReport {
                suite: s,
                passed: checks.iter().all(|c| c.passed),
                checks,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport {
        seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn plus_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(
        &PureState::new(vec![C64::new(h, 0.0), C64::new(h, 0.0)]).expect("unit norm"),
    )
}

fn channels_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = seeded(sub_seed(seed, 0));

    let qubit = NamedGate::Qubit { omega: 1.0 }.generator();
    let gauss = TickDistribution::gaussian(PI, 0.5)?;
    let rho = plus_state();
    let exact = build_channel(&qubit, &gauss).apply(&rho)?;
    let mc = monte_carlo_average_sharded(&qubit, &gauss, &rho, 200_000, sub_seed(seed, 1), SHARDS)?;
    checks.push(Check::new(
        "qubit_gaussian_mc_vs_filter_trace_distance",
        trace_distance(&mc, &exact)?,
        Tolerance::AtMost(0.01),
    ));

    let cnot = NamedGate::Cnot.generator();
    let n = 3;
    let comb = TickDistribution::comb(n, 1.0 / (2.0 * PI * f64::from(n)))?;
    let ch = build_channel(&cnot, &comb);
    let input = DensityMatrix::from_pure(&haar_random_state(4, &mut rng));
    let ideal = DensityMatrix::new(ch.ideal_unitary().conjugate(input.matrix()))?;
    let mc = monte_carlo_average_sharded(&cnot, &comb, &input, 10_000, sub_seed(seed, 2), SHARDS)?;
    checks.push(Check::new(
        "cnot_comb_revival_mc_vs_ideal_trace_distance",
        trace_distance(&mc, &ideal)?,
        Tolerance::AtMost(0.02),
    ));

    for (name, gate) in [
        ("qubit", NamedGate::Qubit { omega: 1.3 }),
        ("cnot", NamedGate::Cnot),
        ("swap", NamedGate::Swap),
    ] {
        let dist = TickDistribution::gaussian(PI, 0.8)?;
        let ch = gate.channel(&dist)?;
        let kraus = ch.kraus().expect("Gaussian filter is real");
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let rho = DensityMatrix::from_pure(&haar_random_state(ch.dim(), &mut rng));
            let a = ch.apply_noise(&rho)?;
            let b = apply_kraus(kraus, &rho)?;
            worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
        }
        checks.push(Check::new(
            format!("{name}_kraus_vs_filter_max_abs"),
            worst,
            Tolerance::AtMost(1e-12),
        ));
    }

    let dists = [
        ("dirac", TickDistribution::dirac(PI)?),
        ("gaussian", TickDistribution::gaussian(PI, 0.7)?),
        ("exponential", TickDistribution::exponential(PI)?),
        ("comb", TickDistribution::comb(5, 0.3)?),
        (
            "empirical",
            TickDistribution::empirical(vec![2.9, 3.1, 3.6], vec![0.2, 0.5, 0.3])?,
        ),
    ];
    let random_h = random_generator(4, &mut rng)?;
    for (name, dist) in &dists {
        let ch = build_channel(&random_h, dist);
        checks.push(Check::new(
            format!("{name}_min_choi_eigenvalue"),
            ch.min_choi_eigenvalue()?,
            Tolerance::AtLeast(-1e-9),
        ));
    }

    let dirac = build_channel(&random_h, &dists[0].1);
    let rho = DensityMatrix::from_pure(&haar_random_state(4, &mut rng));
    let unitary = crate::qcore::evolve_unitary(&rho, &random_h, PI)?;
    checks.push(Check::new(
        "dirac_channel_vs_unitary_max_abs",
        dirac.apply(&rho)?.matrix().max_abs_diff(unitary.matrix()),
        Tolerance::AtMost(1e-12),
    ));
    Ok(checks)
}

fn random_generator<R: rand::Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<crate::qcore::SpectralHamiltonian> {
    let a = ComplexMatrix::from_fn(dim, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    crate::qcore::hermitian_eigendecomposition(&a.hermitian_part())
}

fn z_score(report: &FidelityReport, exact: f64) -> f64 {
    let se = report.standard_error().unwrap_or(0.0);
    if se == 0.0 {
        if (report.value() - exact).abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (report.value() - exact).abs() / se
    }
}

fn fidelity_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..5 {
            let theta = 0.1 + 0.35 * f64::from(i);
            let accuracy = 10f64.powf(-0.5 + 0.75 * f64::from(j));
            let closed = single_gate_fidelity(theta, accuracy)?;
            let kraus = qubit_dephasing_kraus(theta * theta / (2.0 * accuracy))?;
            worst =
                worst.max((closed - average_gate_fidelity_from_kraus(&kraus, 2)?.value()).abs());
        }
    }
    checks.push(Check::new(
        "single_gate_closed_vs_kraus_50pt",
        worst,
        Tolerance::AtMost(1e-14),
    ));

    let mut worst = 0.0f64;
    for gamma in [0.0, 0.1, 1.0, 10.0] {
        let kraus = cnot_dephasing_kraus(gamma)?;
        worst = worst.max(
            (cnot_fullspace_fidelity(gamma)?
                - average_gate_fidelity_from_kraus(&kraus, 4)?.value())
            .abs(),
        );
    }
    checks.push(Check::new(
        "cnot_fullspace_closed_vs_kraus",
        worst,
        Tolerance::AtMost(1e-14),
    ));

    for (k, (theta, accuracy)) in [(PI, PI * PI / 2.0), (PI / 2.0, 1.0), (2.0, 5.0), (PI, 50.0)]
        .into_iter()
        .enumerate()
    {
        let dist = TickDistribution::gaussian_with_accuracy(PI, accuracy)?;
        // gap θ/π so that the mean tick π enacts pulse area θ
        let ch = build_channel(&NamedGate::Qubit { omega: theta / PI }.generator(), &dist);
        let est = haar_average_fidelity_sharded(
            &ch.ideal_unitary(),
            |r| ch.apply(r),
            None,
            10_000,
            sub_seed(seed, 100 + k as u64),
            SHARDS,
        )?;
        checks.push(Check::new(
            format!("single_gate_haar_z_theta{theta:.4}_n{accuracy:.4}"),
            z_score(&est, single_gate_fidelity(theta, accuracy)?),
            Tolerance::AtMost(3.0),
        ));
    }

    let subspace: Vec<Vec<C64>> = [2usize, 3]
        .iter()
        .map(|&i| {
            (0..4)
                .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for (k, gamma) in [0.1, 0.5, 1.0, 2.0].into_iter().enumerate() {
        let kraus = cnot_dephasing_kraus(gamma)?;
        let identity = ComplexMatrix::identity(4);
        let full = haar_average_fidelity_sharded(
            &identity,
            |r| apply_kraus(&kraus, r),
            None,
            10_000,
            sub_seed(seed, 200 + k as u64),
            SHARDS,
        )?;
        checks.push(Check::new(
            format!("cnot_fullspace_haar_z_gamma{gamma}"),
            z_score(&full, cnot_fullspace_fidelity(gamma)?),
            Tolerance::AtMost(3.0),
        ));
        let sub = haar_average_fidelity_sharded(
            &identity,
            |r| apply_kraus(&kraus, r),
            Some(&subspace),
            10_000,
            sub_seed(seed, 300 + k as u64),
            SHARDS,
        )?;
        checks.push(Check::new(
            format!("cnot_subspace_haar_z_gamma{gamma}"),
            z_score(&sub, qubit_dephasing_fidelity(gamma)?),
            Tolerance::AtMost(3.0),
        ));
    }
    Ok(checks)
}

fn unitarity_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    let mut worst_bound = 0.0f64;
    for accuracy in [5.0, 50.0, 500.0] {
        for l in 0..=6usize {
            let spec = CircuitSpec::new(2, vec![vec![(0, 1)]; l])?;
            let kraus = circuit_kraus_operators(&spec, accuracy)?;
            let brute = unitarity_from_kraus(&kraus, 4)?.upsilon_sq;
            worst = worst.max((brute - circuit_unitarity_gamma(l as u64, accuracy)?).abs());
            let bound = bound_from_upsilon(2, brute.sqrt());
            worst_bound =
                worst_bound.max((bound - circuit_fidelity_bound(2, l as u64, accuracy)?).abs());
        }
    }
    checks.push(Check::new(
        "upsilon_sq_brute_vs_closed_l6",
        worst,
        Tolerance::AtMost(1e-12),
    ));
    checks.push(Check::new(
        "bound_from_brute_upsilon",
        worst_bound,
        Tolerance::AtMost(1e-12),
    ));

    checks.push(Check::new(
        "required_accuracy_n20_l1e4",
        required_accuracy(20, 10_000, 0.5)?,
        Tolerance::Within([3.4e4, 3.7e4]),
    ));
    checks.push(Check::new(
        "required_accuracy_n20_l1e6",
        required_accuracy(20, 1_000_000, 0.5)?,
        Tolerance::Within([3.4e6, 3.7e6]),
    ));
    checks.push(Check::new(
        "timing_uncertainty_ns_100ns_3.6e4",
        timing_uncertainty(100e-9, 3.6e4)? * 1e9,
        Tolerance::Within([0.52, 0.54]),
    ));
    let mut worst = 0.0f64;
    for (n, l, f) in [
        (2u32, 5u64, 0.8),
        (4, 12, 0.3),
        (20, 10_000, 0.5),
        (6, 1000, 0.9),
    ] {
        let acc = required_accuracy(n, l, f)?;
        worst = worst.max((circuit_fidelity_bound(n, l, acc)? - f).abs());
    }
    checks.push(Check::new(
        "bound_of_required_accuracy_roundtrip",
        worst,
        Tolerance::AtMost(1e-8),
    ));
    Ok(checks)
}

fn cooling_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let r_s = 0.5 + 0.45 * f64::from(i % 5) / 4.0;
        let z_v = r_s * 2.0 - 1.0
            + (1.0 - (r_s * 2.0 - 1.0)) * (0.2 + 0.7 * f64::from((i / 5) % 4) / 3.0);
        let p_v = 0.05 + 0.9 * f64::from((i / 20) % 5) / 4.0;
        let sigma = [0.0, 0.4, 1.1, 3.0][i as usize % 4];
        let dist = if sigma == 0.0 {
            TickDistribution::dirac(PI)?
        } else {
            TickDistribution::gaussian(PI, sigma)?
        };
        let system = ThermalQubit::from_ground_population(r_s)?;
        let config = CoolingConfig::with_timer(r_s, (1.0 + z_v) / 2.0, p_v, sigma, PI)?;
        let sim = cooling_step_full_sim(&system, z_v, p_v, &dist)?;
        worst = worst.max((sim - ground_population_after_n(&config, 1)).abs());
    }
    checks.push(Check::new(
        "one_step_full_sim_vs_closed_100pt",
        worst,
        Tolerance::AtMost(1e-12),
    ));

    let config = CoolingConfig::new(0.5, 0.999, 0.1, PI * PI / 2.0)?;
    let n = ((1e-6 / (config.r_v() - config.r_s())).ln() / config.contraction().ln()).ceil() as u64;
    checks.push(Check::new(
        "trajectory_converged_at_predicted_n",
        (ground_population_after_n(&config, n) - config.r_v()).abs(),
        Tolerance::AtMost(1e-6),
    ));
    checks.push(Check::new(
        "p_perfect_clock",
        swap_error_probability(f64::INFINITY)?,
        Tolerance::Within([0.0, 0.0]),
    ));
    checks.push(Check::new(
        "p_infinite_sigma",
        swap_error_probability_for_timer(f64::INFINITY, PI)?,
        Tolerance::Within([0.5, 0.5]),
    ));

    let fig3 = CoolingConfig::with_timer(0.5, 0.999, 0.1, 0.0, PI)?;
    let mut rates = Vec::new();
    for sigma in [0.0, 1.0, 3.0, SIGMA_INFINITY_PROXY] {
        let c = fig3.with_sigma(sigma)?;
        rates.push(cooling_rate(&c, 0.0, c.h())?);
    }
    let min_drop = rates
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "rate_n0_strictly_decreasing_in_sigma",
        min_drop,
        Tolerance::AtLeast(f64::MIN_POSITIVE),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [
            Suite::Channels,
            Suite::Fidelity,
            Suite::Unitarity,
            Suite::Cooling,
            Suite::All,
        ] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_semantics() {
        assert!(Tolerance::AtMost(1.0).admits(1.0));
        assert!(!Tolerance::AtMost(1.0).admits(f64::NAN));
        assert!(Tolerance::AtLeast(-1.0).admits(0.0));
        assert!(Tolerance::Within([1.0, 2.0]).admits(1.5));
        assert!(!Tolerance::Within([1.0, 2.0]).admits(2.5));
    }

    #[test]
    fn all_suites_pass_and_are_deterministic() {
        let a = run(Suite::All, DEFAULT_SEED).unwrap();
        let failed: Vec<_> = a.failures().collect();
        assert!(a.passed, "{failed:#?}");
        let b = run(Suite::All, DEFAULT_SEED).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
