// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Dephasing channels induced by imperfect control timers, and their
//! consequences for gate fidelity, circuit fidelity and algorithmic cooling.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod circuit;
pub mod cooling;
pub mod error;
pub mod metrics;
pub mod qcore;
pub mod rng;
pub mod ticks;
pub mod validate;

pub use channels::{build_channel, ChannelDump, DephasedGateChannel, GateNoiseParams, NamedGate};
pub use circuit::{CircuitSpec, SimulationResult};
pub use cooling::{CoolingConfig, ThermalQubit};
pub use error::{Error, Result};
pub use metrics::{CircuitNoiseProfile, FidelityMethod, FidelityReport, UnitarityReport};
pub use qcore::{ComplexMatrix, DensityMatrix, PureState, SpectralHamiltonian};
pub use ticks::{ClockAccuracy, TickDistribution, TickKind};
pub use validate::{Suite, ValidationReport};
