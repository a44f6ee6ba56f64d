// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Dephasing channels induced by an imperfect timer.
//!
//! Evolving under `H = Σ E_n |n⟩⟨n|` for a random time `T` maps each
//! eigenbasis entry to
//!
//! ```text
//! ρ_mn  ->  exp(-i(E_m - E_n)τ) · φ₀(E_m - E_n) · ρ_mn
//! ```
//!
//! with `τ = E[T]`. The channel is stored in exactly this form: the
//! generator, `τ`, and the filter matrix `F_mn = φ₀(E_m - E_n)`. Kraus
//! operators are only produced for the qubit, CNOT and SWAP gates, where the
//! noise is a two-outcome dephasing on an effective qubit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{
    hermitian_eigendecomposition, ComplexMatrix, DensityMatrix, SpectralHamiltonian, TOLERANCE,
};
use crate::rng::{shard_rng, shard_sizes};
use crate::ticks::TickDistribution;

/// Smallest Choi eigenvalue accepted as completely positive.
pub const CP_TOLERANCE: f64 = 1e-9;

/// Dephasing magnitude, Rabi frequency and pulse area of one ill-timed
/// gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateNoiseParams {
    pub gamma: f64,
    pub omega: f64,
    pub theta: f64,
}

impl GateNoiseParams {
    /// Gaussian timer of accuracy `N` driving a pulse of area `θ = Ωτ`:
    /// `Γ = σ²Ω²/2 = θ²/(2N)`.
    pub fn from_pulse(theta: f64, omega: f64, accuracy: f64) -> Result<Self> {
        if !(accuracy > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "accuracy must be > 0, got {accuracy}"
            )));
        }
        if !(omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Rabi frequency must be > 0, got {omega}"
            )));
        }
        Ok(Self {
            gamma: theta * theta / (2.0 * accuracy),
            omega,
            theta,
        })
    }

    pub fn duration(&self) -> f64 {
        self.theta / self.omega
    }
}

/// Timing-noise channel `ρ -> D(U ρ U†)` in spectral-filter form.
#[derive(Clone, Debug)]
pub struct DephasedGateChannel {
    generator: SpectralHamiltonian,
    duration: f64,
    filter: ComplexMatrix,
    kraus: Option<Vec<ComplexMatrix>>,
}

impl DephasedGateChannel {
    /// Reassembles a channel from stored parts, checking every invariant:
    /// unit filter diagonal, `|F_mn| ≤ 1`, conjugate symmetry, complete
    /// positivity and (when given) Kraus completeness.
    pub fn from_parts(
        generator: SpectralHamiltonian,
        duration: f64,
        filter: ComplexMatrix,
        kraus: Option<Vec<ComplexMatrix>>,
    ) -> Result<Self> {
        let d = generator.dim();
        if filter.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: filter.dim(),
            });
        }
        if !duration.is_finite() {
            return Err(Error::InvalidParameter("duration must be finite".into()));
        }
        for m in 0..d {
            if filter[(m, m)] != C64::new(1.0, 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "filter diagonal entry {m} is not 1"
                )));
            }
            for n in 0..d {
                if filter[(m, n)].norm() > 1.0 + TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "|filter[{m},{n}]| exceeds 1"
                    )));
                }
                if (filter[(m, n)] - filter[(n, m)].conj()).norm() > TOLERANCE {
                    return Err(Error::InvalidParameter(
                        "filter is not conjugate symmetric".into(),
                    ));
                }
            }
        }
        if let Some(ks) = &kraus {
            check_completeness(ks, d, TOLERANCE)?;
        }
        let ch = Self {
            generator,
            duration,
            filter,
            kraus,
        };
        let min = ch.min_choi_eigenvalue()?;
        if min < -CP_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "channel is not completely positive (Choi eigenvalue {min:e})"
            )));
        }
        Ok(ch)
    }

    pub fn generator(&self) -> &SpectralHamiltonian {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// Mean pulse duration `τ`.
    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn filter(&self) -> &ComplexMatrix {
        &self.filter
    }

    /// Kraus operators of the dephasing part `D` (ideal unitary stripped),
    /// when known in closed form.
    pub fn kraus(&self) -> Option<&[ComplexMatrix]> {
        self.kraus.as_deref()
    }

    /// Ideal gate `e^{-iHτ}`.
    pub fn ideal_unitary(&self) -> ComplexMatrix {
        self.generator.propagator(self.duration)
    }

    /// Schur multiplier acting on eigenbasis entries:
    /// `M_mn = exp(-i(E_m - E_n)τ) F_mn`.
    pub fn multiplier(&self) -> ComplexMatrix {
        let e = self.generator.energies();
        ComplexMatrix::from_fn(self.dim(), |m, n| {
            C64::from_polar(1.0, -(e[m] - e[n]) * self.duration) * self.filter[(m, n)]
        })
    }

    fn apply_multiplier(&self, op: &ComplexMatrix, multiplier: &ComplexMatrix) -> ComplexMatrix {
        let in_basis = self.generator.to_eigenbasis(op);
        self.generator
            .from_eigenbasis(&in_basis.hadamard(multiplier))
    }

    /// Full channel on an arbitrary operator (linear extension).
    pub fn apply_operator(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(op.dim())?;
        Ok(self.apply_multiplier(op, &self.multiplier()))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?;
        Ok(DensityMatrix::from_cptp_output(out.hermitian_part()))
    }

    /// Dephasing alone, `D(ρ)`: the channel composed with the inverse of
    /// the ideal unitary.
    pub fn apply_noise(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho.dim())?;
        let out = self.apply_multiplier(rho.matrix(), &self.filter);
        Ok(DensityMatrix::from_cptp_output(out.hermitian_part()))
    }

    /// Explicit Choi matrix `Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)` (dimension `d²`).
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        let mult = self.multiplier();
        let mut choi = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut unit = ComplexMatrix::zeros(d);
                unit[(i, j)] = C64::new(1.0, 0.0);
                let img = self.apply_multiplier(&unit, &mult);
                for r in 0..d {
                    for c in 0..d {
                        choi[(i * d + r, j * d + c)] = img[(r, c)];
                    }
                }
            }
        }
        choi
    }

    /// Smallest eigenvalue of the Choi matrix.
    ///
    /// For a Schur multiplier in an orthonormal basis the Choi matrix is
    /// unitarily equivalent to `M ⊕ 0`, so only the `d×d` multiplier needs
    /// diagonalizing.
    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        let spec = hermitian_eigendecomposition(&self.multiplier().hermitian_part())?;
        let lowest = spec.energies()[0];
        Ok(if self.dim() > 1 {
            lowest.min(0.0)
        } else {
            lowest
        })
    }

    pub fn is_cptp(&self) -> Result<bool> {
        let unit_diag = (0..self.dim()).all(|m| self.filter[(m, m)] == C64::new(1.0, 0.0));
        Ok(unit_diag && self.min_choi_eigenvalue()? >= -CP_TOLERANCE)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }

    pub fn to_dump(&self) -> ChannelDump {
        ChannelDump {
            dim: self.dim(),
            energies: self.generator.energies().to_vec(),
            eigenvectors: pairs(self.generator.eigenvectors()),
            tau: self.duration,
            filter: pairs(&self.filter),
        }
    }

    pub fn from_dump(dump: &ChannelDump) -> Result<Self> {
        let vecs = unpairs(&dump.eigenvectors, dump.dim)?;
        let filter = unpairs(&dump.filter, dump.dim)?;
        let generator = SpectralHamiltonian::new(dump.energies.clone(), vecs)?;
        Self::from_parts(generator, dump.tau, filter, None)
    }
}

/// JSON form of a channel. Matrices are row-major lists of `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDump {
    pub dim: usize,
    pub energies: Vec<f64>,
    pub eigenvectors: Vec<[f64; 2]>,
    pub tau: f64,
    pub filter: Vec<[f64; 2]>,
}

fn pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn unpairs(p: &[[f64; 2]], dim: usize) -> Result<ComplexMatrix> {
    if p.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: p.len(),
        });
    }
    ComplexMatrix::from_row_major(p.iter().map(|[re, im]| C64::new(*re, *im)).collect())
}

/// Channel induced by timing the evolution under `h` with `dist`.
pub fn build_channel(h: &SpectralHamiltonian, dist: &TickDistribution) -> DephasedGateChannel {
    let e = h.energies();
    let d = h.dim();
    let mut filter = ComplexMatrix::identity(d);
    for m in 0..d {
        for n in (m + 1)..d {
            let gap = e[m] - e[n];
            let phi = if gap == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                dist.centered_characteristic(gap)
            };
            filter[(m, n)] = phi;
            filter[(n, m)] = phi.conj();
        }
    }
    DephasedGateChannel {
        generator: h.clone(),
        duration: dist.mean(),
        filter,
        kraus: None,
    }
}

pub fn apply_channel(ch: &DephasedGateChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// Effective-qubit gates with closed-form timing noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedGate {
    /// Single qubit, `H = Ω |1⟩⟨1|`.
    Qubit { omega: f64 },
    /// `H = |1−⟩⟨1−|`; `e^{-iHπ}` is CNOT.
    Cnot,
    /// `H = |Ψ−⟩⟨Ψ−|`; `e^{-iHπ}` is SWAP.
    Swap,
}

impl NamedGate {
    pub fn generator(&self) -> SpectralHamiltonian {
        match *self {
            NamedGate::Qubit { omega } => SpectralHamiltonian::diagonal(&[0.0, omega]),
            NamedGate::Cnot => projector_generator(&cnot_excited_state()),
            NamedGate::Swap => projector_generator(&singlet_state()),
        }
    }

    /// Energy gap of the effective qubit.
    pub fn gap(&self) -> f64 {
        match *self {
            NamedGate::Qubit { omega } => omega,
            NamedGate::Cnot | NamedGate::Swap => 1.0,
        }
    }

    pub fn dephasing_kraus(&self, gamma: f64) -> Result<[ComplexMatrix; 2]> {
        match self {
            NamedGate::Qubit { .. } => qubit_dephasing_kraus(gamma),
            NamedGate::Cnot => cnot_dephasing_kraus(gamma),
            NamedGate::Swap => swap_dephasing_kraus(gamma),
        }
    }

    /// Spectral channel plus the closed-form Kraus pair. The pair is only
    /// attached when `φ₀` at the gap is real and nonnegative, which is when
    /// the dephasing is fully described by `Γ = -ln|φ₀|`.
    pub fn channel(&self, dist: &TickDistribution) -> Result<DephasedGateChannel> {
        let mut ch = build_channel(&self.generator(), dist);
        let phi = dist.centered_characteristic(self.gap());
        if phi.im.abs() <= 1e-15 && phi.re >= 0.0 {
            let [k1, k2] = self.dephasing_kraus(dist.dephasing_rate(self.gap()))?;
            ch.kraus = Some(vec![k1, k2]);
        }
        Ok(ch)
    }
}

fn projector_generator(psi: &[C64]) -> SpectralHamiltonian {
    hermitian_eigendecomposition(&ComplexMatrix::projector(psi)).expect("projector is Hermitian")
}

/// `|1−⟩ = (|10⟩ − |11⟩)/√2`
pub fn cnot_excited_state() -> [C64; 4] {
    [0.0, 0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2].map(|x| C64::new(x, 0.0))
}

/// `|Ψ−⟩ = (|01⟩ − |10⟩)/√2`
pub fn singlet_state() -> [C64; 4] {
    [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0].map(|x| C64::new(x, 0.0))
}

/// `|Ψ+⟩ = (|01⟩ + |10⟩)/√2`
pub fn triplet_zero_state() -> [C64; 4] {
    [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0].map(|x| C64::new(x, 0.0))
}

pub fn cnot_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
    .expect("square")
}

pub fn swap_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
    .expect("square")
}

/// `(√((1+e^{-Γ})/2), √((1-e^{-Γ})/2))`
fn dephasing_weights(gamma: f64) -> Result<(f64, f64)> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dephasing magnitude must be >= 0, got {gamma}"
        )));
    }
    let decay = (-gamma).exp();
    Ok((((1.0 + decay) / 2.0).sqrt(), ((1.0 - decay) / 2.0).sqrt()))
}

/// `K1 = a I`, `K2 = b σ_z`.
pub fn qubit_dephasing_kraus(gamma: f64) -> Result<[ComplexMatrix; 2]> {
    let (a, b) = dephasing_weights(gamma)?;
    let z = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
    Ok([ComplexMatrix::identity(2).scale_real(a), z.scale_real(b)])
}

/// Dephasing of an effective qubit whose excited state is `excited`:
/// `K1 = a I₄`, `K2 = b (I₄ − 2|e⟩⟨e|)`.
fn effective_qubit_kraus(gamma: f64, excited: &[C64]) -> Result<[ComplexMatrix; 2]> {
    let (a, b) = dephasing_weights(gamma)?;
    let d = excited.len();
    let reflect = &ComplexMatrix::identity(d) - &ComplexMatrix::projector(excited).scale_real(2.0);
    Ok([
        ComplexMatrix::identity(d).scale_real(a),
        reflect.scale_real(b),
    ])
}

pub fn cnot_dephasing_kraus(gamma: f64) -> Result<[ComplexMatrix; 2]> {
    effective_qubit_kraus(gamma, &cnot_excited_state())
}

pub fn swap_dephasing_kraus(gamma: f64) -> Result<[ComplexMatrix; 2]> {
    effective_qubit_kraus(gamma, &singlet_state())
}

/// Largest entry of `Σ K†K − I`.
pub fn completeness_error(kraus: &[ComplexMatrix], dim: usize) -> Result<f64> {
    let mut sum = ComplexMatrix::zeros(dim);
    for k in kraus {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k.dim(),
            });
        }
        sum = &sum + &(&k.adjoint() * k);
    }
    Ok(sum.max_abs_diff(&ComplexMatrix::identity(dim)))
}

pub(crate) fn check_completeness(kraus: &[ComplexMatrix], dim: usize, tol: f64) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::IncompleteKraus { deviation: 1.0 });
    }
    let deviation = completeness_error(kraus, dim)?;
    if deviation > tol {
        return Err(Error::IncompleteKraus { deviation });
    }
    Ok(())
}

/// `Σ K ρ K†`
pub fn apply_kraus(kraus: &[ComplexMatrix], rho: &DensityMatrix) -> Result<DensityMatrix> {
    let mut out = ComplexMatrix::zeros(rho.dim());
    for k in kraus {
        if k.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: k.dim(),
            });
        }
        out = &out + &k.conjugate(rho.matrix());
    }
    Ok(DensityMatrix::from_cptp_output(out.hermitian_part()))
}

/// Sample average of `e^{-iHt} ρ e^{iHt}` over `samples` draws of the tick
/// time. Independent of the characteristic-function route.
pub fn monte_carlo_average<R: Rng + ?Sized>(
    h: &SpectralHamiltonian,
    dist: &TickDistribution,
    rho: &DensityMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_cptp_output(
        monte_carlo_sum(h, dist, rho, samples, rng)?
            .scale_real(1.0 / samples as f64)
            .hermitian_part(),
    ))
}

fn monte_carlo_sum<R: Rng + ?Sized>(
    h: &SpectralHamiltonian,
    dist: &TickDistribution,
    rho: &DensityMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    let sampler = dist.sampler();
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for _ in 0..samples {
        let t = sampler.sample(rng);
        acc = &acc + &h.propagator(t).conjugate(rho.matrix());
    }
    Ok(acc)
}

/// [`monte_carlo_average`] split over `shards` independent ChaCha streams
/// derived from `seed`. The result depends only on `(seed, shards)`.
pub fn monte_carlo_average_sharded(
    h: &SpectralHamiltonian,
    dist: &TickDistribution,
    rho: &DensityMatrix,
    samples: usize,
    seed: u64,
    shards: usize,
) -> Result<DensityMatrix> {
    let sizes = shard_sizes(samples, shards);
    let partial: Vec<Result<ComplexMatrix>> = sizes
        .par_iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| monte_carlo_sum(h, dist, rho, n, &mut shard_rng(seed, i as u64)))
        .collect();
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for p in partial {
        acc = &acc + &p?;
    }
    Ok(DensityMatrix::from_cptp_output(
        acc.scale_real(1.0 / samples as f64).hermitian_part(),
    ))
}

/// Gaussian timer with mean pulse area `π` on a unit gap, with accuracy `N`.
pub fn pi_pulse_timer(accuracy: f64) -> Result<TickDistribution> {
    if accuracy.is_infinite() {
        TickDistribution::dirac(PI)
    } else {
        TickDistribution::gaussian_with_accuracy(PI, accuracy)
    }
}
