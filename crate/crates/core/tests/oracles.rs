// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use tickq_core::channels::{
    apply_kraus, build_channel, cnot_dephasing_kraus, monte_carlo_average_sharded, NamedGate,
};
use tickq_core::metrics::{
    cnot_fullspace_fidelity, haar_average_fidelity_sharded, qubit_dephasing_fidelity,
};
use tickq_core::qcore::{trace_distance, ComplexMatrix, DensityMatrix, PureState};
use tickq_core::rng::{mean_and_standard_error, seeded, sub_seed};
use tickq_core::TickDistribution;

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn monte_carlo_error_halves_per_quadrupling() {
    let h = NamedGate::Qubit { omega: 1.0 }.generator();
    let dist = TickDistribution::gaussian(PI, 0.5).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rho = DensityMatrix::from_pure(
        &PureState::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap(),
    );
    let exact = build_channel(&h, &dist).apply(&rho).unwrap();

    let (mut log_m, mut log_err) = (Vec::new(), Vec::new());
    for k in 0..8u32 {
        let m = 1000usize << k;
        let errors: Vec<f64> = (0..24)
            .map(|rep| {
                let seed = u64::from(k) * 1000 + rep;
                let mc = monte_carlo_average_sharded(&h, &dist, &rho, m, seed, 4).unwrap();
                trace_distance(&mc, &exact).unwrap()
            })
            .collect();
        let (mean, _) = mean_and_standard_error(&errors);
        log_m.push((m as f64).ln());
        log_err.push(mean.ln());
    }
    let slope = least_squares_slope(&log_m, &log_err);
    assert!((slope + 0.5).abs() <= 0.1, "slope {slope}");
}

#[test]
fn haar_estimates_agree_with_closed_forms() {
    let subspace: Vec<Vec<C64>> = [2usize, 3]
        .iter()
        .map(|&i| {
            (0..4)
                .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for (k, gamma) in [0.1f64, 0.5, 1.0, 2.0].into_iter().enumerate() {
        let seed = |tag: u64| sub_seed(500, 10 * k as u64 + tag);
        // qubit: the spectral channel of a Gaussian timer with σ²/2 = Γ on unit gap
        let dist = TickDistribution::gaussian(PI, (2.0 * gamma).sqrt()).unwrap();
        let ch = build_channel(&NamedGate::Qubit { omega: 1.0 }.generator(), &dist);
        let est = haar_average_fidelity_sharded(
            &ch.ideal_unitary(),
            |r| ch.apply(r),
            None,
            20_000,
            seed(0),
            4,
        )
        .unwrap();
        assert!(
            est.agrees_with(qubit_dephasing_fidelity(gamma).unwrap(), 3.0),
            "qubit {gamma}: {est:?}"
        );

        let kraus = cnot_dephasing_kraus(gamma).unwrap();
        let id = ComplexMatrix::identity(4);
        let full = haar_average_fidelity_sharded(
            &id,
            |r| apply_kraus(&kraus, r),
            None,
            20_000,
            seed(1),
            4,
        )
        .unwrap();
        assert!(
            full.agrees_with(cnot_fullspace_fidelity(gamma).unwrap(), 3.0),
            "cnot {gamma}: {full:?}"
        );
        let sub = haar_average_fidelity_sharded(
            &id,
            |r| apply_kraus(&kraus, r),
            Some(&subspace),
            20_000,
            seed(2),
            4,
        )
        .unwrap();
        assert!(
            sub.agrees_with(qubit_dephasing_fidelity(gamma).unwrap(), 3.0),
            "subspace {gamma}: {sub:?}"
        );
    }
}

#[test]
fn gaussian_filter_matches_monte_carlo_on_random_generators() {
    let mut rng = seeded(77);
    for case in 0..6u64 {
        let dim = if case % 2 == 0 { 2 } else { 4 };
        let a = ComplexMatrix::from_fn(dim, |_, _| {
            use rand::Rng;
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let h = tickq_core::qcore::hermitian_eigendecomposition(&a.hermitian_part()).unwrap();
        let dist = TickDistribution::gaussian(1.0 + case as f64, 0.3 + 0.2 * case as f64).unwrap();
        let rho = DensityMatrix::from_pure(&tickq_core::qcore::haar_random_state(dim, &mut rng));
        let exact = build_channel(&h, &dist).apply(&rho).unwrap();
        let mc = monte_carlo_average_sharded(&h, &dist, &rho, 200_000, case, 8).unwrap();
        assert!(trace_distance(&mc, &exact).unwrap() < 0.01);
    }
}
