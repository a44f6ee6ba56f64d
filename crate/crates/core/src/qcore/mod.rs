// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra and density-matrix utilities.

mod eigen;
mod matrix;
mod state;

pub use eigen::{hermitian_eigendecomposition, SpectralHamiltonian, MAX_EIGEN_DIM};
pub use matrix::ComplexMatrix;
pub use state::{
    evolve_unitary, haar_random_state, partial_trace, partial_trace_matrix, trace_distance,
    DensityMatrix, PureState,
};

/// Exactness tolerance for state validity and unitarity checks.
pub const TOLERANCE: f64 = 1e-10;

/// Reconstruction tolerance for eigendecompositions.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-9;
