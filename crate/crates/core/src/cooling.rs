// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Algorithmic cooling of a qubit by repeated SWAPs with the virtual qubit
//! of a thermal machine, when each SWAP pulse is timed by an imperfect clock.
//!
//! The machine fully rethermalises between steps. A SWAP reaches the virtual
//! qubit with probability `P_v`; a mistimed SWAP acts as the identity with
//! probability `p`, so each step pulls the ground population towards `r_v`
//! with effective weight `P̃ = P_v (1 − p)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channels::{apply_kraus, swap_dephasing_kraus, swap_matrix};
use crate::error::{Error, Result};
use crate::metrics::pi_pulse_gamma;
use crate::qcore::{partial_trace, DensityMatrix};
use crate::ticks::TickDistribution;

pub const DEFAULT_STEP: f64 = 0.1;
/// Stand-in for `σ = ∞` in rate tables.
pub const SIGMA_INFINITY_PROXY: f64 = 1e6;

/// `p = (1 − e^{-π²/2N})/2`; `N = ∞` gives 0.
pub fn swap_error_probability(accuracy: f64) -> Result<f64> {
    Ok(-0.5 * (-pi_pulse_gamma(accuracy)?).exp_m1())
}

/// `p` for a timer of mean `tau` and spread `sigma`; `σ = ∞` gives 1/2.
pub fn swap_error_probability_for_timer(sigma: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "invalid timer: tau = {tau}, sigma = {sigma}"
        )));
    }
    if sigma.is_infinite() {
        return Ok(0.5);
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    swap_error_probability((tau / sigma).powi(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct CoolingConfig {
    r_s: f64,
    r_v: f64,
    p_v: f64,
    sigma: f64,
    tau: f64,
    h: f64,
}

/// JSON form. Give at most one of `accuracy` or `sigma`; neither means a
/// perfect timer.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    r_s: f64,
    r_v: f64,
    p_v: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accuracy: Option<f64>,
    #[serde(default)]
    sigma: Option<f64>,
    #[serde(default)]
    tau: Option<f64>,
    #[serde(default)]
    h: Option<f64>,
}

impl TryFrom<RawConfig> for CoolingConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let tau = raw.tau.unwrap_or(PI);
        let sigma = match (raw.accuracy, raw.sigma) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter(
                    "give either accuracy or sigma, not both".into(),
                ))
            }
            (Some(n), None) => {
                if !(n > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "accuracy must be > 0, got {n}"
                    )));
                }
                tau / n.sqrt()
            }
            (None, Some(s)) => s,
            (None, None) => 0.0,
        };
        let mut config = Self::with_timer(raw.r_s, raw.r_v, raw.p_v, sigma, tau)?;
        if let Some(h) = raw.h {
            config = config.with_step(h)?;
        }
        Ok(config)
    }
}

impl From<CoolingConfig> for RawConfig {
    fn from(c: CoolingConfig) -> Self {
        Self {
            r_s: c.r_s,
            r_v: c.r_v,
            p_v: c.p_v,
            accuracy: None,
            sigma: Some(c.sigma),
            tau: Some(c.tau),
            h: Some(c.h),
        }
    }
}

impl CoolingConfig {
    /// Timer of mean `π` (the SWAP pulse area) and accuracy `N`.
    pub fn new(r_s: f64, r_v: f64, p_v: f64, accuracy: f64) -> Result<Self> {
        if !(accuracy > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "accuracy must be > 0, got {accuracy}"
            )));
        }
        Self::with_timer(r_s, r_v, p_v, PI / accuracy.sqrt(), PI)
    }

    /// `r_v = r_s` is accepted and describes a machine with nothing to give.
    pub fn with_timer(r_s: f64, r_v: f64, p_v: f64, sigma: f64, tau: f64) -> Result<Self> {
        if !(0.0 <= r_s && r_s <= r_v && r_v <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= r_s <= r_v <= 1, got r_s = {r_s}, r_v = {r_v}"
            )));
        }
        if !(p_v > 0.0 && p_v < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < P_v < 1, got {p_v}"
            )));
        }
        swap_error_probability_for_timer(sigma, tau)?;
        Ok(Self {
            r_s,
            r_v,
            p_v,
            sigma,
            tau,
            h: DEFAULT_STEP,
        })
    }

    pub fn with_step(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "step h must be > 0, got {h}"
            )));
        }
        self.h = h;
        Ok(self)
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::with_timer(self.r_s, self.r_v, self.p_v, sigma, self.tau)?.with_step(self.h)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn r_s(&self) -> f64 {
        self.r_s
    }

    pub fn r_v(&self) -> f64 {
        self.r_v
    }

    pub fn p_v(&self) -> f64 {
        self.p_v
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn z_s(&self) -> f64 {
        2.0 * self.r_s - 1.0
    }

    pub fn z_v(&self) -> f64 {
        2.0 * self.r_v - 1.0
    }

    pub fn error_probability(&self) -> f64 {
        swap_error_probability_for_timer(self.sigma, self.tau).expect("validated timer")
    }

    /// `P̃ = P_v (1 − p)`.
    pub fn effective_swap_probability(&self) -> f64 {
        self.p_v * (1.0 - self.error_probability())
    }

    /// Per-step contraction `1 − P̃` of the distance to `r_v`.
    pub fn contraction(&self) -> f64 {
        1.0 - self.effective_swap_probability()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalQubit {
    pub beta: f64,
    pub omega: f64,
    pub z: f64,
    pub r: f64,
}

impl ThermalQubit {
    /// Thermal qubit of unit gap with ground population `r ∈ [1/2, 1]`.
    pub fn from_ground_population(r: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "thermal ground population must be in [1/2, 1], got {r}"
            )));
        }
        let z = 2.0 * r - 1.0;
        Ok(Self {
            beta: z.atanh(),
            omega: 1.0,
            z,
            r,
        })
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::diagonal(&[self.r, 1.0 - self.r]).expect("populations in [0, 1]")
    }
}

/// `Z = tanh(βω)`, `r = (1 + Z)/2`.
pub fn thermal_qubit(beta: f64, omega: f64) -> Result<ThermalQubit> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gap must be > 0, got {omega}"
        )));
    }
    if !(beta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be >= 0, got {beta}"
        )));
    }
    let z = (beta * omega).tanh();
    Ok(ThermalQubit {
        beta,
        omega,
        z,
        r: (1.0 + z) / 2.0,
    })
}

/// `r^(n) = r_v − (r_v − r_s)(1 − P̃)^n`.
pub fn ground_population_after_n(config: &CoolingConfig, n: u64) -> f64 {
    let steps = i32::try_from(n).map_or_else(
        |_| config.contraction().powf(n as f64),
        |k| config.contraction().powi(k),
    );
    config.r_v - (config.r_v - config.r_s) * steps
}

/// [`ground_population_after_n`] continued to real `n`.
pub fn ground_population_at(config: &CoolingConfig, n: f64) -> f64 {
    config.r_v - (config.r_v - config.r_s) * config.contraction().powf(n)
}

/// Central-difference cooling rate
/// `R_h = ((r_s − r_v)/h)((1 − P̃)^h − 1)(1 − P̃)^{n − h/2}`.
pub fn cooling_rate(config: &CoolingConfig, n: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step h must be > 0, got {h}"
        )));
    }
    let q = config.contraction();
    Ok((config.r_s - config.r_v) / h * (q.powf(h) - 1.0) * q.powf(n - h / 2.0))
}

/// One protocol step simulated on the system ⊗ virtual-qubit state: ideal
/// SWAP followed by its dephasing pair, mixed with the untouched system at
/// weight `1 − P_v`. Returns the system's new ground population.
///
/// `dist` times the SWAP generator `|Ψ−⟩⟨Ψ−|`, so its mean must be `π`.
pub fn cooling_step_full_sim(
    system: &ThermalQubit,
    z_v: f64,
    p_v: f64,
    dist: &TickDistribution,
) -> Result<f64> {
    if !(p_v > 0.0 && p_v <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < P_v <= 1, got {p_v}"
        )));
    }
    if !(0.0..=1.0).contains(&z_v) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= Z_v <= 1, got {z_v}"
        )));
    }
    if (dist.mean() - PI).abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!(
            "SWAP timer must have mean π, got {}",
            dist.mean()
        )));
    }
    let rho_s = system.density_matrix();
    let rho_v = DensityMatrix::diagonal(&[(1.0 + z_v) / 2.0, (1.0 - z_v) / 2.0])?;
    let joint = rho_s.tensor(&rho_v);
    let swapped = DensityMatrix::new(swap_matrix().conjugate(joint.matrix()))?;
    let noisy = apply_kraus(&swap_dephasing_kraus(dist.dephasing_rate(1.0))?, &swapped)?;
    let reduced = partial_trace(&noisy, &[2, 2], &[0])?;
    Ok(p_v * reduced.population(0) + (1.0 - p_v) * rho_s.population(0))
}

/// Fewest steps with `r^(n) ≥ target`.
pub fn swaps_to_target(config: &CoolingConfig, target: f64) -> Result<u64> {
    if target <= config.r_s {
        return Ok(0);
    }
    if target >= config.r_v {
        return Err(Error::Infeasible(format!(
            "target {target} is not below r_v = {}",
            config.r_v
        )));
    }
    let q = config.contraction();
    let estimate = ((config.r_v - target) / (config.r_v - config.r_s)).ln() / q.ln();
    let mut n = estimate.ceil().max(0.0) as u64;
    while n > 0 && ground_population_after_n(config, n - 1) >= target {
        n -= 1;
    }
    while ground_population_after_n(config, n) < target {
        n += 1;
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub n: u64,
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub sigma: f64,
    pub n: u64,
    pub rate: f64,
}

pub fn trajectory(config: &CoolingConfig, n_max: u64) -> Vec<TrajectoryRow> {
    (0..=n_max)
        .map(|n| TrajectoryRow {
            n,
            r: ground_population_after_n(config, n),
        })
        .collect()
}

/// `R_h` at integer `n ∈ [0, n_max]` for each timer spread, grouped by σ.
pub fn rate_table(config: &CoolingConfig, sigmas: &[f64], n_max: u64) -> Result<Vec<RateRow>> {
    let mut rows = Vec::with_capacity(sigmas.len() * (n_max as usize + 1));
    for &sigma in sigmas {
        let c = config.with_sigma(sigma)?;
        for n in 0..=n_max {
            rows.push(RateRow {
                sigma,
                n,
                rate: cooling_rate(&c, n as f64, c.h())?,
            });
        }
    }
    Ok(rows)
}
