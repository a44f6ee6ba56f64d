// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Tick distributions of control timers.
//!
//! A timer that is meant to end a pulse at time `τ` instead stops it at a
//! random time `T`. Everything downstream depends on `T` only through its
//! mean and the mean-centered characteristic function
//!
//! ```text
//! φ₀(Ω) = E[exp(-iΩ(T - τ))]
//! ```
//!
//! whose magnitude at an energy gap `Ω` is the surviving fraction of the
//! corresponding coherence.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64 as C64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::{Distribution, Uniform};
use rand::Rng;
use rand_distr::{Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;
const CSV_WEIGHT_SUM_TOL: f64 = 1e-6;

/// Shape of a tick distribution. Build through the [`TickDistribution`]
/// constructors so the invariants hold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TickKind {
    /// Perfect timer, always ticks at `tau`.
    Dirac {
        tau: f64,
    },
    Gaussian {
        tau: f64,
        sigma: f64,
    },
    /// Exponential waiting time with the given mean.
    Exponential {
        tau: f64,
    },
    /// `n` equally likely atoms at `k / (n ε)`, `k = 0..n`.
    Comb {
        n: u32,
        epsilon: f64,
    },
    /// Weighted atoms.
    Empirical {
        times: Vec<f64>,
        weights: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TickDistribution {
    kind: TickKind,
}

impl TickDistribution {
    pub fn dirac(tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self {
            kind: TickKind::Dirac { tau },
        })
    }

    pub fn gaussian(tau: f64, sigma: f64) -> Result<Self> {
        check_tau(tau)?;
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(Self {
            kind: TickKind::Gaussian { tau, sigma },
        })
    }

    /// Gaussian timer with mean `tau` and accuracy `N = τ²/σ²`.
    pub fn gaussian_with_accuracy(tau: f64, accuracy: f64) -> Result<Self> {
        if !(accuracy > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "accuracy must be > 0, got {accuracy}"
            )));
        }
        Self::gaussian(tau, tau / accuracy.sqrt())
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        check_tau(mean)?;
        Ok(Self {
            kind: TickKind::Exponential { tau: mean },
        })
    }

    pub fn comb(n: u32, epsilon: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDistribution("comb needs n >= 1".into()));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "comb rate must be > 0, got {epsilon}"
            )));
        }
        Ok(Self {
            kind: TickKind::Comb { n, epsilon },
        })
    }

    /// Atom list; weights must be nonnegative and sum to 1 within 1e-12.
    pub fn empirical(times: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} times vs {} weights",
                times.len(),
                weights.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidDistribution(
                "tick times must be finite".into(),
            ));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and >= 0".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            kind: TickKind::Empirical { times, weights },
        })
    }

    /// Reads `time_seconds,weight` rows. A non-numeric first row is taken
    /// as a header. Weights summing to within 1e-6 of one are renormalized;
    /// anything else is rejected.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut times = Vec::new();
        let mut weights = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::InvalidDistribution(format!(
                    "row {} has {} columns, expected 2",
                    i + 1,
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(t), Ok(w)) => {
                    times.push(t);
                    weights.push(w);
                }
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::InvalidDistribution(format!(
                        "row {} is not numeric",
                        i + 1
                    )));
                }
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > CSV_WEIGHT_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, outside 1 ± {CSV_WEIGHT_SUM_TOL:e}"
            )));
        }
        for w in &mut weights {
            *w /= total;
        }
        Self::empirical(times, weights)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn kind(&self) -> &TickKind {
        &self.kind
    }

    /// Mean tick time `τ`.
    pub fn mean(&self) -> f64 {
        self.moments().0
    }

    /// `(τ, σ²)`, exact per variant.
    pub fn moments(&self) -> (f64, f64) {
        match &self.kind {
            TickKind::Dirac { tau } => (*tau, 0.0),
            TickKind::Gaussian { tau, sigma } => (*tau, sigma * sigma),
            TickKind::Exponential { tau } => (*tau, tau * tau),
            TickKind::Comb { n, epsilon } => {
                let n = f64::from(*n);
                let tau = (n - 1.0) / (2.0 * n * epsilon);
                let var = (n * n - 1.0) / (12.0 * n * n * epsilon * epsilon);
                (tau, var)
            }
            TickKind::Empirical { times, weights } => {
                let mean: f64 = times.iter().zip(weights).map(|(t, w)| t * w).sum();
                let var: f64 = times
                    .iter()
                    .zip(weights)
                    .map(|(t, w)| w * (t - mean) * (t - mean))
                    .sum();
                (mean, var)
            }
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.moments().1.sqrt()
    }

    /// Clock accuracy `N = τ²/σ²`; infinite for a zero-variance timer.
    pub fn accuracy(&self) -> Result<ClockAccuracy> {
        let (tau, var) = self.moments();
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "accuracy needs a positive mean tick time, got {tau}"
            )));
        }
        if var == 0.0 {
            return Ok(ClockAccuracy::PERFECT);
        }
        ClockAccuracy::new(tau * tau / var)
    }

    /// `φ₀(Ω) = E[exp(-iΩ(T - τ))]`.
    pub fn centered_characteristic(&self, omega: f64) -> C64 {
        if omega == 0.0 {
            return C64::new(1.0, 0.0);
        }
        match &self.kind {
            TickKind::Dirac { .. } => C64::new(1.0, 0.0),
            TickKind::Gaussian { sigma, .. } => {
                C64::new((-0.5 * sigma * sigma * omega * omega).exp(), 0.0)
            }
            TickKind::Exponential { tau } => {
                C64::from_polar(1.0, omega * tau) / C64::new(1.0, omega * tau)
            }
            TickKind::Comb { n, epsilon } => C64::new(comb_envelope(*n, omega / epsilon), 0.0),
            TickKind::Empirical { times, weights } => {
                let mean = self.mean();
                times
                    .iter()
                    .zip(weights)
                    .map(|(t, w)| C64::from_polar(*w, -omega * (t - mean)))
                    .sum()
            }
        }
    }

    /// `Γ(Ω) = -ln|φ₀(Ω)|`; infinite when the coherence is fully erased.
    pub fn dephasing_rate(&self, omega: f64) -> f64 {
        let mag = self.centered_characteristic(omega).norm();
        if mag == 0.0 {
            f64::INFINITY
        } else {
            (-mag.ln()).max(0.0)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            TickKind::Dirac { tau } => *tau,
            TickKind::Gaussian { tau, sigma } => {
                if *sigma == 0.0 {
                    *tau
                } else {
                    Normal::new(*tau, *sigma)
                        .expect("validated sigma")
                        .sample(rng)
                }
            }
            TickKind::Exponential { tau } => {
                Exp::new(1.0 / tau).expect("validated mean").sample(rng)
            }
            TickKind::Comb { n, epsilon } => {
                let k = Uniform::new(0, *n).expect("n >= 1").sample(rng);
                f64::from(k) / (f64::from(*n) * epsilon)
            }
            TickKind::Empirical { times, weights } => {
                let idx = WeightedIndex::new(weights)
                    .expect("validated weights")
                    .sample(rng);
                times[idx]
            }
        }
    }

    /// Sampler that reuses the variant's distribution object across draws.
    pub fn sampler(&self) -> TickSampler {
        let inner = match &self.kind {
            TickKind::Gaussian { tau, sigma } if *sigma > 0.0 => {
                SamplerKind::Normal(Normal::new(*tau, *sigma).expect("validated sigma"))
            }
            TickKind::Empirical { times, weights } => SamplerKind::Weighted(
                times.clone(),
                WeightedIndex::new(weights).expect("validated weights"),
            ),
            _ => SamplerKind::Direct(self.clone()),
        };
        TickSampler { inner }
    }
}

/// Reusable sampler returned by [`TickDistribution::sampler`].
#[derive(Clone, Debug)]
pub struct TickSampler {
    inner: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Normal(Normal<f64>),
    Weighted(Vec<f64>, WeightedIndex<f64>),
    Direct(TickDistribution),
}

impl Distribution<f64> for TickSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.inner {
            SamplerKind::Normal(n) => n.sample(rng),
            SamplerKind::Weighted(times, idx) => times[idx.sample(rng)],
            SamplerKind::Direct(d) => d.sample(rng),
        }
    }
}

impl<'de> Deserialize<'de> for TickDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let kind = TickKind::deserialize(de)?;
        let checked = match kind {
            TickKind::Dirac { tau } => Self::dirac(tau),
            TickKind::Gaussian { tau, sigma } => Self::gaussian(tau, sigma),
            TickKind::Exponential { tau } => Self::exponential(tau),
            TickKind::Comb { n, epsilon } => Self::comb(n, epsilon),
            TickKind::Empirical { times, weights } => Self::empirical(times, weights),
        };
        checked.map_err(serde::de::Error::custom)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidDistribution(format!(
            "mean tick time must be > 0, got {tau}"
        )));
    }
    Ok(())
}

/// Dimensionless clock accuracy `N`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClockAccuracy(f64);

impl ClockAccuracy {
    pub const PERFECT: ClockAccuracy = ClockAccuracy(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "accuracy must be >= 0, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_perfect(self) -> bool {
        self.0.is_infinite()
    }
}

/// `sin(x/2) / (n sin(x/2n))`, evaluated without cancellation near the
/// removable singularities `x = 2πnk`.
fn comb_envelope(n: u32, x: f64) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let nf = f64::from(n);
    let a = x / (2.0 * nf);
    let k = (a / PI).round();
    let delta = a - k * PI;
    // (-1)^{k(n-1)}
    let odd = (k.abs() % 2.0 == 1.0) && (n - 1) % 2 == 1;
    let sign = if odd { -1.0 } else { 1.0 };
    if delta == 0.0 {
        sign
    } else {
        sign * (nf * delta).sin() / (nf * delta.sin())
    }
}

/// Characteristic function `E[exp(-iΩT)]` of the comb distribution with
/// atoms at `k/(nε)`, global phase included.
pub fn comb_characteristic_closed_form(n: u32, epsilon: f64, omega: f64) -> Result<C64> {
    if n < 1 || !(epsilon > 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "comb needs n >= 1 and ε > 0 (n={n}, ε={epsilon})"
        )));
    }
    let x = omega / epsilon;
    let nf = f64::from(n);
    let phase = C64::from_polar(1.0, -x * (0.5 - 0.5 / nf));
    Ok(phase * comb_envelope(n, x))
}
