// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::eigen::{hermitian_eigendecomposition, SpectralHamiltonian};
use super::matrix::ComplexMatrix;
use super::TOLERANCE;
use crate::error::{Error, Result};

/// Trace-one, Hermitian, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at [`TOLERANCE`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        validate(&mat)?;
        Ok(Self { mat })
    }

    /// Wraps a matrix produced by a trace-preserving, completely positive
    /// operation on a valid state. Callers are responsible for validity.
    pub(crate) fn from_cptp_output(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_hermitian(1e-8));
        Self { mat }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            mat: ComplexMatrix::projector(psi.amplitudes()),
        }
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut m = ComplexMatrix::zeros(dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self { mat: m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Diagonal state with the given populations (must be a probability
    /// vector).
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = populations.iter().map(|&p| C64::new(p, 0.0)).collect();
        Self::new(ComplexMatrix::diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.mat.frobenius_norm_sq()
    }

    pub fn population(&self, index: usize) -> f64 {
        self.mat[(index, index)].re
    }

    /// Re-runs the full validity check.
    pub fn validate(&self) -> Result<()> {
        validate(&self.mat)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kron(&other.mat),
        }
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        let rho_psi = self.mat.apply(psi);
        psi.iter()
            .zip(&rho_psi)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }
}

fn validate(mat: &ComplexMatrix) -> Result<()> {
    let herm = mat.hermiticity_error();
    if herm > TOLERANCE {
        return Err(Error::InvalidState(format!(
            "not Hermitian (deviation {herm:e})"
        )));
    }
    let tr = mat.trace();
    if (tr.re - 1.0).abs() > TOLERANCE || tr.im.abs() > TOLERANCE {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let spectrum = hermitian_eigendecomposition(mat)?;
    let min = spectrum.energies()[0];
    if min < -TOLERANCE {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// Haar-distributed pure state: normalized vector of i.i.d. complex
/// Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    assert!(dim >= 1, "Haar state dimension must be at least 1");
    loop {
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(psi) = PureState::normalized(amps) {
            return psi;
        }
    }
}

/// `e^{-iHt} ρ e^{iHt}`
pub fn evolve_unitary(
    rho: &DensityMatrix,
    h: &SpectralHamiltonian,
    t: f64,
) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    let u = h.propagator(t);
    Ok(DensityMatrix::from_cptp_output(u.conjugate(rho.matrix())))
}

/// Traces out every subsystem not listed in `keep`.
///
/// `dims` gives the subsystem dimensions, most significant first. The kept
/// subsystems stay in their original relative order.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: total,
        });
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.is_empty() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidParameter(format!(
            "keep set {keep:?} invalid for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len())
        .filter(|i| !keep_sorted.contains(i))
        .collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let env_dim: usize = traced_dims.iter().product();

    // strides of each subsystem in the full index
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let offset = |digits_of: &[usize], which: &[usize], sub_dims: &[usize], idx: usize| -> usize {
        let mut rem = idx;
        let mut off = 0;
        for k in (0..which.len()).rev() {
            let d = rem % sub_dims[k];
            rem /= sub_dims[k];
            off += d * digits_of[which[k]];
        }
        off
    };

    let kept_offsets: Vec<usize> = (0..out_dim)
        .map(|i| offset(&strides, &keep_sorted, &kept_dims, i))
        .collect();
    let env_offsets: Vec<usize> = (0..env_dim)
        .map(|i| offset(&strides, &traced, &traced_dims, i))
        .collect();

    let mut out = ComplexMatrix::zeros(out_dim);
    for (r, &kr) in kept_offsets.iter().enumerate() {
        for (c, &kc) in kept_offsets.iter().enumerate() {
            out[(r, c)] = env_offsets.iter().map(|&e| m[(kr + e, kc + e)]).sum();
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_cptp_output(partial_trace_matrix(
        rho.matrix(),
        dims,
        keep,
    )?))
}

/// `½‖a − b‖₁`, from the eigenvalues of `a − b`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = (a.matrix() - b.matrix()).hermitian_part();
    let spec = hermitian_eigendecomposition(&diff)?;
    let d = 0.5 * spec.energies().iter().map(|e| e.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::new(vec![r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)]).unwrap())
    }

    fn minus() -> DensityMatrix {
        DensityMatrix::from_pure(
            &PureState::new(vec![r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]).unwrap(),
        )
    }

    #[test]
    fn validation_rejects_bad_states() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let neg = ComplexMatrix::diagonal(&[r(1.5), r(-0.5)]);
        assert!(DensityMatrix::new(neg).is_err());
        let mut nh = ComplexMatrix::identity(2).scale_real(0.5);
        nh[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(nh).is_err());
        assert!(DensityMatrix::new(plus().into_matrix()).is_ok());
    }

    #[test]
    fn evolve_identity_and_phase_flip() {
        let h = SpectralHamiltonian::diagonal(&[0.0, 1.0]);
        let rho = plus();
        assert_eq!(evolve_unitary(&rho, &h, 0.0).unwrap(), rho);
        let out = evolve_unitary(&rho, &h, PI).unwrap();
        assert!(out.matrix().max_abs_diff(minus().matrix()) < 1e-12);
    }

    #[test]
    fn evolve_cnot_generator_moves_10_to_11() {
        let one_minus = [0.0, 0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2].map(r);
        let h = SpectralHamiltonian::from_matrix(&ComplexMatrix::projector(&one_minus)).unwrap();
        let out = evolve_unitary(&DensityMatrix::basis(4, 2), &h, PI).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(DensityMatrix::basis(4, 3).matrix())
                < 1e-12
        );
    }

    #[test]
    fn evolve_dimension_mismatch() {
        let h = SpectralHamiltonian::diagonal(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            evolve_unitary(&plus(), &h, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let a = DensityMatrix::new(
            ComplexMatrix::from_row_major(vec![
                r(0.7),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                r(0.3),
            ])
            .unwrap(),
        )
        .unwrap();
        let b = plus();
        let ab = a.tensor(&b);
        let kept = partial_trace(&ab, &[2, 2], &[0]).unwrap();
        assert!(kept.matrix().max_abs_diff(a.matrix()) < 1e-15);
        let kept_b = partial_trace(&ab, &[2, 2], &[1]).unwrap();
        assert!(kept_b.matrix().max_abs_diff(b.matrix()) < 1e-15);

        let bell =
            PureState::new(vec![r(FRAC_1_SQRT_2), r(0.0), r(0.0), r(FRAC_1_SQRT_2)]).unwrap();
        let reduced = partial_trace(&DensityMatrix::from_pure(&bell), &[2, 2], &[0]).unwrap();
        assert!(
            reduced
                .matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_three_parties_keeps_order() {
        let s0 = DensityMatrix::basis(2, 1);
        let s1 = DensityMatrix::maximally_mixed(3);
        let s2 = plus();
        let full = s0.tensor(&s1).tensor(&s2);
        let kept = partial_trace(&full, &[2, 3, 2], &[2, 0]).unwrap();
        assert!(kept.matrix().max_abs_diff(s0.tensor(&s2).matrix()) < 1e-15);
        assert!(partial_trace(&full, &[2, 2, 2], &[0]).is_err());
        assert!(partial_trace(&full, &[2, 3, 2], &[3]).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::basis(2, 0);
        let one = DensityMatrix::basis(2, 1);
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!(trace_distance(&zero, &DensityMatrix::basis(3, 0)).is_err());
    }

    #[test]
    fn haar_single_dimension_is_a_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = haar_random_state(1, &mut rng);
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_qubit_bloch_vector_mean_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let m = 100_000;
        let mut acc = [0.0f64; 3];
        for _ in 0..m {
            let psi = haar_random_state(2, &mut rng);
            let (a, b) = (psi.amplitudes()[0], psi.amplitudes()[1]);
            let coh = a.conj() * b;
            acc[0] += 2.0 * coh.re;
            acc[1] += 2.0 * coh.im;
            acc[2] += a.norm_sqr() - b.norm_sqr();
        }
        let norm = acc
            .iter()
            .map(|x| (x / m as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(norm < 0.02, "mean Bloch vector norm {norm}");
    }

    #[test]
    fn haar_two_qubit_marginal_purity() {
        // E[tr ρ_A²] = (d_A + d_B)/(d_A d_B + 1) = 4/5 for two qubits
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let m = 100_000;
        let samples: Vec<f64> = (0..m)
            .map(|_| {
                let rho = DensityMatrix::from_pure(&haar_random_state(4, &mut rng));
                partial_trace(&rho, &[2, 2], &[0]).unwrap().purity()
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / m as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        assert!((mean - 0.8).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn haar_is_unitarily_invariant_in_distribution() {
        // first-coordinate weight |⟨0|ψ⟩|² is Beta(1, d-1) with mean 1/d and
        // variance (d-1)/(d²(d+1)), before and after a fixed unitary
        let d = 4;
        let h = SpectralHamiltonian::from_matrix(&ComplexMatrix::from_fn(d, |r, c| {
            C64::new((r + c) as f64 * 0.3, r as f64 - c as f64)
        }))
        .unwrap();
        let u = h.propagator(0.77);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = 50_000;
        let (mut plain, mut rotated) = (0.0, 0.0);
        for _ in 0..m {
            let psi = haar_random_state(d, &mut rng);
            plain += psi.amplitudes()[0].norm_sqr();
            rotated += u.apply(psi.amplitudes())[0].norm_sqr();
        }
        let sd = ((d - 1) as f64 / ((d * d) as f64 * (d + 1) as f64)).sqrt();
        let se = sd / (m as f64).sqrt();
        for mean in [plain / m as f64, rotated / m as f64] {
            assert!((mean - 0.25).abs() < 4.0 * se, "mean {mean}");
        }
    }
}
