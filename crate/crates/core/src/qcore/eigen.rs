// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a
//! diagonal unitary, then applies the usual real symmetric Jacobi
//! rotation. Sweeps run over all pairs `p < q` until the off-diagonal
//! Frobenius norm falls below `1e-15 * ‖A‖_F`.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::TOLERANCE;
use crate::error::{Error, Result};

pub const MAX_EIGEN_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;
const HERMITIAN_INPUT_TOL: f64 = 1e-8;

/// Hermitian operator stored as ascending eigenvalues and an orthonormal
/// eigenbasis (columns of `eigenvectors`).
#[derive(Clone, Debug)]
pub struct SpectralHamiltonian {
    energies: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralHamiltonian {
    /// Assembles a generator from a spectrum and eigenbasis, checking that
    /// the basis is unitary to [`TOLERANCE`].
    pub fn new(energies: Vec<f64>, eigenvectors: ComplexMatrix) -> Result<Self> {
        if energies.len() != eigenvectors.dim() {
            return Err(Error::DimensionMismatch {
                expected: eigenvectors.dim(),
                found: energies.len(),
            });
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("energies must be finite".into()));
        }
        if !eigenvectors.is_unitary(TOLERANCE) {
            return Err(Error::InvalidParameter(
                "eigenvectors are not orthonormal".into(),
            ));
        }
        Ok(Self {
            energies,
            eigenvectors,
        })
    }

    /// Diagonal generator `Σ E_n |n⟩⟨n|` in the computational basis.
    pub fn diagonal(energies: &[f64]) -> Self {
        Self {
            energies: energies.to_vec(),
            eigenvectors: ComplexMatrix::identity(energies.len()),
        }
    }

    pub fn from_matrix(h: &ComplexMatrix) -> Result<Self> {
        hermitian_eigendecomposition(h)
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// `Σ E_n v_n v_n†`
    pub fn matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(d, |r, c| {
            (0..d)
                .map(|n| v[(r, n)] * v[(c, n)].conj() * self.energies[n])
                .sum()
        })
    }

    /// `e^{-iHt}` built from the spectrum.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let d = self.dim();
        let v = &self.eigenvectors;
        let phases: Vec<C64> = self
            .energies
            .iter()
            .map(|e| C64::from_polar(1.0, -e * t))
            .collect();
        ComplexMatrix::from_fn(d, |r, c| {
            (0..d)
                .map(|n| v[(r, n)] * phases[n] * v[(c, n)].conj())
                .sum()
        })
    }

    /// Expresses `op` in the eigenbasis: `V† op V`.
    pub fn to_eigenbasis(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(&v.adjoint() * op) * v
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(v * op) * &v.adjoint()
    }
}

/// Diagonalizes a Hermitian matrix (dim ≤ 64) by cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending. Each eigenvector's phase is fixed so
/// that its largest-magnitude component is real and positive.
pub fn hermitian_eigendecomposition(h: &ComplexMatrix) -> Result<SpectralHamiltonian> {
    let n = h.dim();
    if n > MAX_EIGEN_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: MAX_EIGEN_DIM,
        });
    }
    let deviation = h.hermiticity_error();
    if deviation > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm_sq().sqrt();
    let threshold = 1e-15 * scale.max(f64::MIN_POSITIVE);

    let mut converged = n == 1;
    let mut residual = off_diagonal_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if residual <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        residual = off_diagonal_norm(&a);
    }
    if !converged && residual > threshold {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let energies: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vecs = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let phase = canonical_phase(&v, src);
        for r in 0..n {
            vecs[(r, col)] = v[(r, src)] * phase;
        }
    }
    Ok(SpectralHamiltonian {
        energies,
        eigenvectors: vecs,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided rotation `A ← J† A J`, `V ← V J`, zeroing `a_pq`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.dim();
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let theta = 0.5 * (2.0 * mag).atan2(gamma - alpha);
    let (s, c) = theta.sin_cos();
    // e^{-iφ} with a_pq = |a_pq| e^{iφ}
    let unphase = apq.conj() / mag;

    // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = unphase * (-s);
    let jqq = unphase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Phase that rotates column `col` so its largest component (first one,
/// within 1e-12) is real positive.
fn canonical_phase(v: &ComplexMatrix, col: usize) -> C64 {
    let n = v.dim();
    let max = (0..n).map(|r| v[(r, col)].norm()).fold(0.0, f64::max);
    let pivot = (0..n)
        .map(|r| v[(r, col)])
        .find(|z| z.norm() >= max - 1e-12)
        .unwrap_or(C64::new(1.0, 0.0));
    pivot.conj() / pivot.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            m[(r, r)] = C64::new(rng.random_range(-2.0..2.0), 0.0);
            for c in (r + 1)..dim {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(r, c)] = z;
                m[(c, r)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn pauli_z_spectrum() {
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let h = hermitian_eigendecomposition(&z).unwrap();
        assert_eq!(h.energies(), &[-1.0, 1.0]);
        // ground state |1⟩, excited |0⟩
        assert_eq!(
            h.eigenvectors().column(0),
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        );
        assert_eq!(
            h.eigenvectors().column(1),
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        );
    }

    #[test]
    fn cnot_generator_projector() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let one_minus = [0.0, 0.0, s, -s].map(|x| C64::new(x, 0.0));
        let p = ComplexMatrix::projector(&one_minus);
        let h = hermitian_eigendecomposition(&p).unwrap();
        for (e, want) in h.energies().iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((e - want).abs() < 1e-12);
        }
        let top = h.eigenvectors().column(3);
        let overlap: C64 = top.iter().zip(&one_minus).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        // canonical phase: largest component real positive
        assert!(top[2].re > 0.0 && top[2].im.abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2, 3, 4, 8, 16, 64] {
            let m = random_hermitian(dim, &mut rng);
            let h = hermitian_eigendecomposition(&m).unwrap();
            assert!(h.matrix().max_abs_diff(&m) < 1e-9, "dim {dim}");
            assert!(h.eigenvectors().is_unitary(1e-10), "dim {dim}");
            assert!(h.energies().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let m = ComplexMatrix::identity(5).scale_real(3.0);
        let h = hermitian_eigendecomposition(&m).unwrap();
        assert!(h.energies().iter().all(|&e| e == 3.0));
        assert!(h.eigenvectors().is_unitary(1e-12));
    }

    #[test]
    fn rejects_bad_input() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            hermitian_eigendecomposition(&m),
            Err(Error::NotHermitian { .. })
        ));
        let big = ComplexMatrix::identity(65);
        assert!(matches!(
            hermitian_eigendecomposition(&big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn propagator_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = hermitian_eigendecomposition(&random_hermitian(4, &mut rng)).unwrap();
        for t in [0.0, 0.3, 2.0, -5.0] {
            assert!(h.propagator(t).is_unitary(1e-12));
        }
    }
}
