// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Layered CNOT circuits under independently timed gates.
//!
//! Qubit 0 is the most significant bit of a basis index. Each gate applies
//! the ideal CNOT and then the dephasing pair for `Γ = π²/(2N)` on its two
//! qubits.

use std::collections::HashSet;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{cnot_dephasing_kraus, cnot_matrix};
use crate::error::{Error, Result};
use crate::metrics::{
    accuracy_floor, circuit_fidelity_bound, haar_average_fidelity, haar_average_fidelity_sharded,
    pi_pulse_gamma, required_accuracy, FidelityReport,
};
use crate::qcore::{ComplexMatrix, DensityMatrix};

pub const MAX_UNITARY_QUBITS: usize = 10;
pub const MAX_SIMULATION_QUBITS: usize = 6;
/// Cap on `2^L · 4ⁿ` matrix entries held by [`circuit_kraus_operators`].
pub const MAX_KRAUS_ENTRIES: usize = 1 << 24;
pub const MIN_FIDELITY_SAMPLES: usize = 100;
pub const DEFAULT_LAYER_COUNTS: [u64; 4] = [1, 5, 25, 100];

/// `(control, target)`.
pub type Cnot = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct CircuitSpec {
    n: usize,
    layers: Vec<Vec<Cnot>>,
}

#[derive(Deserialize)]
struct RawSpec {
    n: usize,
    layers: Vec<Vec<Cnot>>,
}

impl TryFrom<RawSpec> for CircuitSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.n, raw.layers)
    }
}

impl CircuitSpec {
    pub fn new(n: usize, layers: Vec<Vec<Cnot>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCircuit(
                "circuit needs at least one qubit".into(),
            ));
        }
        for (t, layer) in layers.iter().enumerate() {
            let mut used = HashSet::new();
            for &(c, g) in layer {
                if c >= n || g >= n {
                    return Err(Error::InvalidCircuit(format!(
                        "layer {t}: CNOT ({c}, {g}) out of range for {n} qubits"
                    )));
                }
                if c == g {
                    return Err(Error::InvalidCircuit(format!(
                        "layer {t}: control equals target ({c})"
                    )));
                }
                if !used.insert(c) || !used.insert(g) {
                    return Err(Error::InvalidCircuit(format!(
                        "layer {t}: qubit reused by CNOT ({c}, {g})"
                    )));
                }
            }
        }
        Ok(Self { n, layers })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<Cnot>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_counts(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.len() as u64).collect()
    }

    pub fn total_gates(&self) -> u64 {
        self.layers.iter().map(|l| l.len() as u64).sum()
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn gates(&self) -> impl Iterator<Item = Cnot> + '_ {
        self.layers.iter().flatten().copied()
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }
}

/// Seeded random layered circuit with exactly `total_gates` CNOTs; each layer
/// holds between one and `n/2` gates on uniformly chosen disjoint pairs.
pub fn random_layered_circuit<R: Rng + ?Sized>(
    n: usize,
    total_gates: usize,
    rng: &mut R,
) -> Result<CircuitSpec> {
    if n < 2 && total_gates > 0 {
        return Err(Error::InvalidCircuit(
            "CNOTs need at least two qubits".into(),
        ));
    }
    let mut qubits: Vec<usize> = (0..n).collect();
    let mut layers = Vec::new();
    let mut remaining = total_gates;
    while remaining > 0 {
        let k = rng.random_range(1..=n / 2).min(remaining);
        qubits.shuffle(rng);
        layers.push(
            qubits
                .chunks_exact(2)
                .take(k)
                .map(|p| (p[0], p[1]))
                .collect(),
        );
        remaining -= k;
    }
    CircuitSpec::new(n, layers)
}

pub fn ideal_circuit_unitary(spec: &CircuitSpec) -> Result<ComplexMatrix> {
    if spec.n > MAX_UNITARY_QUBITS {
        return Err(Error::TooLarge {
            dim: spec.dim(),
            max: 1 << MAX_UNITARY_QUBITS,
        });
    }
    // the circuit permutes basis states: column j is |perm(j)⟩
    let perm: Vec<usize> = (0..spec.dim())
        .map(|mut idx| {
            for (c, t) in spec.gates() {
                if idx & spec.bit(c) != 0 {
                    idx ^= spec.bit(t);
                }
            }
            idx
        })
        .collect();
    let mut u = ComplexMatrix::zeros(spec.dim());
    for (j, &i) in perm.iter().enumerate() {
        u[(i, j)] = C64::new(1.0, 0.0);
    }
    Ok(u)
}

#[derive(Clone, Debug)]
pub struct SimulationResult {
    pub rho_out: DensityMatrix,
    pub per_layer_trace_check: Vec<f64>,
}

/// Two-qubit Kraus pair of one noisy CNOT, ideal gate included.
pub fn noisy_cnot_kraus(accuracy: f64) -> Result<[ComplexMatrix; 2]> {
    let gate = cnot_matrix();
    let [k1, k2] = cnot_dephasing_kraus(pi_pulse_gamma(accuracy)?)?;
    Ok([&k1 * &gate, &k2 * &gate])
}

pub fn simulate_noisy_circuit(
    spec: &CircuitSpec,
    accuracy: f64,
    rho_in: &DensityMatrix,
) -> Result<SimulationResult> {
    check_simulable(spec)?;
    if rho_in.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: rho_in.dim(),
        });
    }
    let kraus = noisy_cnot_kraus(accuracy)?;
    let mut rho = rho_in.matrix().clone();
    let mut checks = Vec::with_capacity(spec.depth());
    for layer in &spec.layers {
        for &(c, t) in layer {
            let mut next = ComplexMatrix::zeros(spec.dim());
            for k in &kraus {
                let term = conjugate_local(&rho, k, spec.bit(c), spec.bit(t));
                next = &next + &term;
            }
            rho = next;
        }
        checks.push(rho.trace().re);
    }
    Ok(SimulationResult {
        rho_out: DensityMatrix::from_cptp_output(rho.hermitian_part()),
        per_layer_trace_check: checks,
    })
}

fn check_simulable(spec: &CircuitSpec) -> Result<()> {
    if spec.n > MAX_SIMULATION_QUBITS {
        return Err(Error::TooLarge {
            dim: spec.dim(),
            max: 1 << MAX_SIMULATION_QUBITS,
        });
    }
    Ok(())
}

/// `A ρ A†` for a 4×4 `A` acting on the qubits with index masks `hi`, `lo`.
fn conjugate_local(rho: &ComplexMatrix, a: &ComplexMatrix, hi: usize, lo: usize) -> ComplexMatrix {
    let dim = rho.dim();
    let offsets = [0, lo, hi, hi | lo];
    let bases: Vec<usize> = (0..dim).filter(|i| i & (hi | lo) == 0).collect();
    let mut left = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        for &b in &bases {
            let v: [C64; 4] = std::array::from_fn(|k| rho[(b | offsets[k], col)]);
            for r in 0..4 {
                left[(b | offsets[r], col)] = (0..4).map(|k| a[(r, k)] * v[k]).sum();
            }
        }
    }
    let mut out = ComplexMatrix::zeros(dim);
    for row in 0..dim {
        for &b in &bases {
            let v: [C64; 4] = std::array::from_fn(|k| left[(row, b | offsets[k])]);
            for c in 0..4 {
                out[(row, b | offsets[c])] = (0..4).map(|k| v[k] * a[(c, k)].conj()).sum();
            }
        }
    }
    out
}

fn embed_local(a: &ComplexMatrix, n: usize, hi: usize, lo: usize) -> ComplexMatrix {
    let local = |idx: usize| 2 * usize::from(idx & hi != 0) + usize::from(idx & lo != 0);
    let rest = !(hi | lo);
    ComplexMatrix::from_fn(1 << n, |i, j| {
        if i & rest == j & rest {
            a[(local(i), local(j))]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Every product of per-gate Kraus operators, `2^L` in total, on the full
/// register. Exponential; intended as a brute-force reference.
pub fn circuit_kraus_operators(spec: &CircuitSpec, accuracy: f64) -> Result<Vec<ComplexMatrix>> {
    check_simulable(spec)?;
    let count = u32::try_from(spec.total_gates())
        .ok()
        .and_then(|l| 1usize.checked_shl(l))
        .filter(|&c| c.saturating_mul(spec.dim() * spec.dim()) <= MAX_KRAUS_ENTRIES)
        .ok_or(Error::TooLarge {
            dim: spec.dim(),
            max: MAX_KRAUS_ENTRIES,
        })?;
    let kraus = noisy_cnot_kraus(accuracy)?;
    let mut products = Vec::with_capacity(count);
    products.push(ComplexMatrix::identity(spec.dim()));
    for (c, t) in spec.gates() {
        let embedded: Vec<ComplexMatrix> = kraus
            .iter()
            .map(|k| embed_local(k, spec.n, spec.bit(c), spec.bit(t)))
            .collect();
        products = products
            .iter()
            .flat_map(|p| embedded.iter().map(move |k| k * p))
            .collect();
    }
    Ok(products)
}

/// Haar-averaged fidelity of the noisy circuit against its ideal unitary.
/// Circuits without gates return exactly 1.
pub fn empirical_average_fidelity<R: Rng + ?Sized>(
    spec: &CircuitSpec,
    accuracy: f64,
    samples: usize,
    rng: &mut R,
) -> Result<FidelityReport> {
    check_fidelity_inputs(spec, accuracy, samples)?;
    if spec.total_gates() == 0 {
        return Ok(FidelityReport::closed_form(1.0));
    }
    let ideal = ideal_circuit_unitary(spec)?;
    haar_average_fidelity(
        &ideal,
        |rho| simulate_noisy_circuit(spec, accuracy, rho).map(|r| r.rho_out),
        None,
        samples,
        rng,
    )
}

/// [`empirical_average_fidelity`] over `shards` independent streams of `seed`.
pub fn empirical_average_fidelity_sharded(
    spec: &CircuitSpec,
    accuracy: f64,
    samples: usize,
    seed: u64,
    shards: usize,
) -> Result<FidelityReport> {
    check_fidelity_inputs(spec, accuracy, samples)?;
    if spec.total_gates() == 0 {
        return Ok(FidelityReport::closed_form(1.0));
    }
    let ideal = ideal_circuit_unitary(spec)?;
    haar_average_fidelity_sharded(
        &ideal,
        |rho| simulate_noisy_circuit(spec, accuracy, rho).map(|r| r.rho_out),
        None,
        samples,
        seed,
        shards,
    )
}

fn check_fidelity_inputs(spec: &CircuitSpec, accuracy: f64, samples: usize) -> Result<()> {
    check_simulable(spec)?;
    pi_pulse_gamma(accuracy)?;
    if samples < MIN_FIDELITY_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_FIDELITY_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    #[serde(rename = "L")]
    pub total_gates: u64,
    #[serde(rename = "N")]
    pub accuracy: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRow {
    pub m: u64,
    pub l_t: u64,
    #[serde(rename = "required_N")]
    pub required_accuracy: f64,
}

/// Fidelity bound for every `(L, N)` pair, grouped by `N`.
pub fn bound_table(qubits: u32, gate_counts: &[u64], accuracies: &[f64]) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::with_capacity(gate_counts.len() * accuracies.len());
    for &accuracy in accuracies {
        for &total_gates in gate_counts {
            rows.push(BoundRow {
                total_gates,
                accuracy,
                bound: circuit_fidelity_bound(qubits, total_gates, accuracy)?,
            });
        }
    }
    Ok(rows)
}

/// Accuracy needed to keep the bound at `threshold` for depth `m` with
/// `l_t` CNOTs per layer, grouped by `l_t`. Rows whose bound stays above
/// `threshold` for every clock report 0.
pub fn budget_table(
    qubits: u32,
    layer_counts: &[u64],
    depths: &[u64],
    threshold: f64,
) -> Result<Vec<BudgetRow>> {
    let mut rows = Vec::with_capacity(layer_counts.len() * depths.len());
    for &l_t in layer_counts {
        if 2 * l_t > u64::from(qubits) {
            return Err(Error::InvalidCircuit(format!(
                "{l_t} CNOTs per layer need at least {} qubits",
                2 * l_t
            )));
        }
        for &m in depths {
            rows.push(BudgetRow {
                m,
                l_t,
                required_accuracy: if accuracy_floor(qubits, m * l_t) >= threshold
                    && threshold < 1.0
                {
                    0.0
                } else {
                    required_accuracy(qubits, m * l_t, threshold)?
                },
            });
        }
    }
    Ok(rows)
}

/// `0` followed by roughly `per_decade` log-spaced integers up to `max`.
pub fn log_grid(max: u64, per_decade: u32) -> Vec<u64> {
    let mut grid = vec![0];
    if max == 0 {
        return grid;
    }
    let steps = ((max as f64).log10() * f64::from(per_decade.max(1))).ceil() as u32;
    for s in 0..=steps {
        let v = (10f64
            .powf(f64::from(s) / f64::from(per_decade.max(1)))
            .round() as u64)
            .min(max);
        if grid.last() != Some(&v) {
            grid.push(v);
        }
    }
    grid
}
