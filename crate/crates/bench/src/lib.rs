// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Seeded fixtures shared by the benchmarks.

use num_complex::Complex64 as C64;
use rand::Rng;
use tickq_core::qcore::{haar_random_state, hermitian_eigendecomposition};
use tickq_core::rng::seeded;
use tickq_core::{ComplexMatrix, DensityMatrix, SpectralHamiltonian};

/// Random Hermitian generator of dimension `dim`, fixed by `seed`.
pub fn generator(dim: usize, seed: u64) -> SpectralHamiltonian {
    let mut rng = seeded(seed);
    let a = ComplexMatrix::from_fn(dim, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    hermitian_eigendecomposition(&a.hermitian_part()).expect("hermitian input")
}

/// Haar-random pure state as a density matrix.
pub fn pure_state(dim: usize, seed: u64) -> DensityMatrix {
    DensityMatrix::from_pure(&haar_random_state(dim, &mut seeded(seed)))
}
