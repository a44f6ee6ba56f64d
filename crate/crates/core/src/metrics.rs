// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Fidelity and unitarity of timing-noise channels, the circuit fidelity
//! bound, and clock budgets derived from it.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::check_completeness;
use crate::error::{Error, Result};
use crate::qcore::{haar_random_state, ComplexMatrix, DensityMatrix, PureState};
use crate::rng::{mean_and_standard_error, shard_rng, shard_sizes};

const KRAUS_COMPLETENESS_TOL: f64 = 1e-8;

/// Default average-fidelity threshold for clock budgets.
pub const DEFAULT_FIDELITY_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMethod {
    ClosedForm,
    KrausTrace,
    HaarMonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    value: f64,
    method: FidelityMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    standard_error: Option<f64>,
}

impl FidelityReport {
    pub fn closed_form(value: f64) -> Self {
        Self::exact(value, FidelityMethod::ClosedForm)
    }

    fn exact(value: f64, method: FidelityMethod) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method,
            standard_error: None,
        }
    }

    pub fn monte_carlo(value: f64, standard_error: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method: FidelityMethod::HaarMonteCarlo,
            standard_error: Some(standard_error),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn method(&self) -> FidelityMethod {
        self.method
    }

    pub fn standard_error(&self) -> Option<f64> {
        self.standard_error
    }

    /// Whether `expected` lies within `k` standard errors (exact reports
    /// compare at 1e-12).
    pub fn agrees_with(&self, expected: f64, k: f64) -> bool {
        match self.standard_error {
            Some(se) => (self.value - expected).abs() <= k * se,
            None => (self.value - expected).abs() <= 1e-12,
        }
    }
}

/// `F̄ = (Σ|tr K_i|² + d)/(d² + d)`.
pub fn average_gate_fidelity_from_kraus(
    kraus: &[ComplexMatrix],
    d: usize,
) -> Result<FidelityReport> {
    check_completeness(kraus, d, KRAUS_COMPLETENESS_TOL)?;
    let d_f = d as f64;
    let traces: f64 = kraus.iter().map(|k| k.trace().norm_sqr()).sum();
    Ok(FidelityReport::exact(
        (traces + d_f) / (d_f * d_f + d_f),
        FidelityMethod::KrausTrace,
    ))
}

/// Effective-qubit dephasing fidelity `(2 + e^{-Γ})/3`.
pub fn qubit_dephasing_fidelity(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok((2.0 + (-gamma).exp()) / 3.0)
}

/// Single ill-timed gate of pulse area `θ` and clock accuracy `N`:
/// `(2 + e^{-θ²/2N})/3`.
pub fn single_gate_fidelity(theta: f64, accuracy: f64) -> Result<f64> {
    check_accuracy(accuracy)?;
    qubit_dephasing_fidelity(theta * theta / (2.0 * accuracy))
}

/// CNOT noise averaged over the whole two-qubit space: `(7 + 3e^{-Γ})/10`.
pub fn cnot_fullspace_fidelity(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok((7.0 + 3.0 * (-gamma).exp()) / 10.0)
}

/// `Γ = π²/(2N)` for a π pulse timed with accuracy `N`.
pub fn pi_pulse_gamma(accuracy: f64) -> Result<f64> {
    check_accuracy(accuracy)?;
    Ok(PI * PI / (2.0 * accuracy))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dephasing magnitude must be >= 0, got {gamma}"
        )));
    }
    Ok(())
}

fn check_accuracy(accuracy: f64) -> Result<()> {
    if !(accuracy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "accuracy must be > 0, got {accuracy}"
        )));
    }
    Ok(())
}

/// Haar-averaged `⟨ψ|U† E(|ψ⟩⟨ψ|) U|ψ⟩`.
///
/// `subspace`, when given, lists orthonormal vectors spanning the space the
/// input states are drawn from; otherwise states are Haar on the full space.
pub fn haar_average_fidelity<R, F>(
    ideal: &ComplexMatrix,
    channel: F,
    subspace: Option<&[Vec<C64>]>,
    samples: usize,
    rng: &mut R,
) -> Result<FidelityReport>
where
    R: Rng + ?Sized,
    F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "Haar estimate needs at least 2 samples".into(),
        ));
    }
    let values = haar_fidelity_samples(ideal, &channel, subspace, samples, rng)?;
    let (mean, se) = mean_and_standard_error(&values);
    Ok(FidelityReport::monte_carlo(mean, se))
}

/// [`haar_average_fidelity`] over `shards` independent streams of `seed`.
pub fn haar_average_fidelity_sharded<F>(
    ideal: &ComplexMatrix,
    channel: F,
    subspace: Option<&[Vec<C64>]>,
    samples: usize,
    seed: u64,
    shards: usize,
) -> Result<FidelityReport>
where
    F: Fn(&DensityMatrix) -> Result<DensityMatrix> + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "Haar estimate needs at least 2 samples".into(),
        ));
    }
    let parts: Vec<Result<Vec<f64>>> = shard_sizes(samples, shards)
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            haar_fidelity_samples(ideal, &channel, subspace, n, &mut shard_rng(seed, i as u64))
        })
        .collect();
    let mut values = Vec::with_capacity(samples);
    for p in parts {
        values.extend(p?);
    }
    let (mean, se) = mean_and_standard_error(&values);
    Ok(FidelityReport::monte_carlo(mean, se))
}

fn haar_fidelity_samples<R, F>(
    ideal: &ComplexMatrix,
    channel: &F,
    subspace: Option<&[Vec<C64>]>,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<f64>>
where
    R: Rng + ?Sized,
    F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let d = ideal.dim();
    if let Some(basis) = subspace {
        if basis.is_empty() || basis.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidParameter(
                "subspace basis does not match the gate dimension".into(),
            ));
        }
    }
    (0..samples)
        .map(|_| {
            let psi = match subspace {
                None => haar_random_state(d, rng),
                Some(basis) => {
                    let coeffs = haar_random_state(basis.len(), rng);
                    let mut amps = vec![C64::new(0.0, 0.0); d];
                    for (c, v) in coeffs.amplitudes().iter().zip(basis) {
                        for (a, b) in amps.iter_mut().zip(v) {
                            *a += c * b;
                        }
                    }
                    PureState::normalized(amps)?
                }
            };
            let out = channel(&DensityMatrix::from_pure(&psi))?;
            let target = ideal.apply(psi.amplitudes());
            Ok(out.expectation(&target))
        })
        .collect()
}

/// `Υ²` and unitarity `u = (d²Υ² − 1)/(d² − 1)` of a Kraus set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub upsilon_sq: f64,
    pub unitarity: f64,
}

/// `Υ² = Σ_i (‖K_i‖₂² / d)²`, with each Schatten norm taken as an explicit
/// trace `tr(K_i† K_i)`.
pub fn unitarity_from_kraus(kraus: &[ComplexMatrix], d: usize) -> Result<UnitarityReport> {
    check_completeness(kraus, d, KRAUS_COMPLETENESS_TOL)?;
    let d_f = d as f64;
    let upsilon_sq: f64 = kraus
        .iter()
        .map(|k| {
            let norm_sq = (&k.adjoint() * k).trace().re;
            (norm_sq / d_f).powi(2)
        })
        .sum();
    Ok(UnitarityReport {
        upsilon_sq,
        unitarity: unitarity_from_upsilon_sq(upsilon_sq, d_f),
    })
}

fn unitarity_from_upsilon_sq(upsilon_sq: f64, d: f64) -> f64 {
    if d == 1.0 {
        1.0
    } else {
        (d * d * upsilon_sq - 1.0) / (d * d - 1.0)
    }
}

/// Layer structure and clock accuracy of a CNOT circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitNoiseProfile {
    qubits: u32,
    layer_counts: Vec<u64>,
    accuracy: f64,
}

impl CircuitNoiseProfile {
    pub fn new(qubits: u32, layer_counts: Vec<u64>, accuracy: f64) -> Result<Self> {
        if qubits < 1 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        check_accuracy(accuracy)?;
        if let Some(t) = layer_counts.iter().position(|&l| 2 * l > u64::from(qubits)) {
            return Err(Error::InvalidCircuit(format!(
                "layer {t} has {} CNOTs but only {qubits} qubits",
                layer_counts[t]
            )));
        }
        Ok(Self {
            qubits,
            layer_counts,
            accuracy,
        })
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn layer_counts(&self) -> &[u64] {
        &self.layer_counts
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn total_gates(&self) -> u64 {
        self.layer_counts.iter().sum()
    }

    pub fn fidelity_bound(&self) -> f64 {
        circuit_fidelity_bound(self.qubits, self.total_gates(), self.accuracy)
            .expect("validated profile")
    }
}

/// `ln((1 + e^{-π²/N})/2)`, accurate for large `N`.
fn ln_gate_factor(accuracy: f64) -> f64 {
    if accuracy.is_infinite() {
        return 0.0;
    }
    // (1 + e^{-x})/2 = 1 - (1 - e^{-x})/2
    let x = PI * PI / accuracy;
    (0.5 * (-x).exp_m1()).ln_1p()
}

/// `Υ² = ((1 + e^{-π²/N})/2)^L` for `L` independently timed CNOTs.
pub fn circuit_unitarity_gamma(total_gates: u64, accuracy: f64) -> Result<f64> {
    check_accuracy(accuracy)?;
    Ok((total_gates as f64 * ln_gate_factor(accuracy)).exp())
}

/// Unitarity `u` of the `L`-gate dephasing map on `n` qubits.
pub fn circuit_unitarity(qubits: u32, total_gates: u64, accuracy: f64) -> Result<f64> {
    let upsilon_sq = circuit_unitarity_gamma(total_gates, accuracy)?;
    Ok(unitarity_from_upsilon_sq(
        upsilon_sq,
        2f64.powi(2 * qubits as i32),
    ))
}

/// Circuit-level fidelity bound `(2ⁿ Υ + 1)/(2ⁿ + 1)` with
/// `Υ = ((1 + e^{-π²/N})/2)^{L/2}`.
pub fn circuit_fidelity_bound(qubits: u32, total_gates: u64, accuracy: f64) -> Result<f64> {
    if qubits < 1 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    check_accuracy(accuracy)?;
    let upsilon = (0.5 * total_gates as f64 * ln_gate_factor(accuracy)).exp();
    Ok(bound_from_upsilon(qubits, upsilon))
}

/// `(dΥ + 1)/(d + 1)` with `d = 2ⁿ`, written to stay finite for large `n`.
pub fn bound_from_upsilon(qubits: u32, upsilon: f64) -> f64 {
    let inv_d = (-(qubits as f64) * LN_2).exp();
    (upsilon + inv_d) / (1.0 + inv_d)
}

/// Limit of [`circuit_fidelity_bound`] as `N → 0⁺`.
pub fn accuracy_floor(qubits: u32, total_gates: u64) -> f64 {
    bound_from_upsilon(qubits, (-0.5 * total_gates as f64 * LN_2).exp())
}

/// Smallest clock accuracy `N` at which [`circuit_fidelity_bound`] reaches
/// `threshold`, by bisection in `ln N` to relative width 1e-12.
pub fn required_accuracy(qubits: u32, total_gates: u64, threshold: f64) -> Result<f64> {
    if qubits < 1 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Infeasible(format!(
            "threshold {threshold} is not reachable at finite accuracy"
        )));
    }
    let floor = accuracy_floor(qubits, total_gates);
    if floor >= threshold {
        return Err(Error::Infeasible(format!(
            "bound already reaches {threshold} as N -> 0 (floor {floor})"
        )));
    }
    let bound = |n: f64| circuit_fidelity_bound(qubits, total_gates, n).expect("positive accuracy");

    let mut hi = 1.0;
    while bound(hi) < threshold {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Infeasible(format!(
                "threshold {threshold} needs N beyond f64 range"
            )));
        }
    }
    let mut lo = hi / 2.0;
    while bound(lo) >= threshold {
        lo /= 2.0;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::Infeasible(format!(
                "threshold {threshold} met for every N"
            )));
        }
    }
    while hi / lo - 1.0 > 1e-12 {
        let mid = (lo * hi).sqrt();
        if bound(mid) >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Large-`L` estimate `N ≈ Lπ²/(4 ln 2)` of the accuracy needed for a 0.5
/// threshold. Cross-check only.
pub fn required_accuracy_asymptotic(total_gates: u64) -> f64 {
    total_gates as f64 * PI * PI / (4.0 * LN_2)
}

/// Timing uncertainty `σ = τ/√N` of a clock with accuracy `N`.
pub fn timing_uncertainty(tau: f64, accuracy: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gate duration must be > 0, got {tau}"
        )));
    }
    check_accuracy(accuracy)?;
    Ok(tau / accuracy.sqrt())
}

/// Largest accuracy an autonomous clock producing `ΔS` nats per tick can
/// reach: `ΔS/2`.
pub fn entropy_accuracy_bound(entropy_per_tick: f64) -> Result<f64> {
    if !(entropy_per_tick >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "entropy per tick must be >= 0, got {entropy_per_tick}"
        )));
    }
    Ok(entropy_per_tick / 2.0)
}

/// Minimum entropy per tick (nats) for accuracy `N`.
pub fn entropy_required(accuracy: f64) -> Result<f64> {
    check_accuracy(accuracy)?;
    Ok(2.0 * accuracy)
}
