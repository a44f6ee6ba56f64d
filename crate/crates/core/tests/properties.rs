// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tickq_core::channels::{build_channel, qubit_dephasing_kraus};
use tickq_core::cooling::{cooling_rate, ground_population_after_n, CoolingConfig};
use tickq_core::metrics::{
    average_gate_fidelity_from_kraus, circuit_fidelity_bound, circuit_unitarity_gamma,
    required_accuracy, single_gate_fidelity,
};
use tickq_core::qcore::{
    evolve_unitary, haar_random_state, hermitian_eigendecomposition, partial_trace_matrix,
    ComplexMatrix, DensityMatrix, SpectralHamiltonian,
};
use tickq_core::TickDistribution;

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
    .hermitian_part()
}

fn random_generator(dim: usize, rng: &mut ChaCha8Rng) -> SpectralHamiltonian {
    hermitian_eigendecomposition(&random_hermitian(dim, rng).scale_real(4.0)).unwrap()
}

fn random_mixed_state(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let w: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.01).collect();
    let total: f64 = w.iter().sum();
    let mut m = ComplexMatrix::zeros(dim);
    for wi in w {
        let p = DensityMatrix::from_pure(&haar_random_state(dim, rng));
        m = &m + &p.matrix().scale_real(wi / total);
    }
    DensityMatrix::new(m).unwrap()
}

fn distribution() -> impl Strategy<Value = TickDistribution> {
    prop_oneof![
        (0.1f64..10.0).prop_map(|t| TickDistribution::dirac(t).unwrap()),
        (0.1f64..10.0, 0.0f64..3.0).prop_map(|(t, s)| TickDistribution::gaussian(t, s).unwrap()),
        (0.1f64..10.0).prop_map(|t| TickDistribution::exponential(t).unwrap()),
        (1u32..12, 0.05f64..5.0).prop_map(|(n, e)| TickDistribution::comb(n, e).unwrap()),
        prop::collection::vec((-5.0f64..5.0, 0.01f64..1.0), 1..8).prop_map(|atoms| {
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let (times, weights): (Vec<f64>, Vec<f64>) =
                atoms.into_iter().map(|(t, w)| (t, w / total)).unzip();
            let fix = 1.0 - weights.iter().sum::<f64>();
            let mut weights = weights;
            weights[0] += fix;
            TickDistribution::empirical(times, weights).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_hermitian(8, &mut rng), random_hermitian(8, &mut rng));
        let combo = &x.scale_real(a) + &y.scale_real(b);
        for keep in [vec![0], vec![1, 2], vec![0, 2]] {
            let lhs = partial_trace_matrix(&combo, &[2, 2, 2], &keep).unwrap();
            let rhs = &partial_trace_matrix(&x, &[2, 2, 2], &keep).unwrap().scale_real(a)
                + &partial_trace_matrix(&y, &[2, 2, 2], &keep).unwrap().scale_real(b);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            prop_assert!((lhs.trace() - combo.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn evolution_preserves_purity_and_spectrum(seed in any::<u64>(), t in -20.0f64..20.0, dim in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_generator(dim, &mut rng);
        let rho = random_mixed_state(dim, &mut rng);
        let out = evolve_unitary(&rho, &h, t).unwrap();
        prop_assert!((out.purity() - rho.purity()).abs() < 1e-10);
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
        out.validate().unwrap();
    }

    #[test]
    fn eigenvectors_are_orthonormal(seed in any::<u64>(), dim in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(dim, &mut rng);
        let s = hermitian_eigendecomposition(&h).unwrap();
        let v = s.eigenvectors();
        prop_assert!((&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-10);
        prop_assert!(s.matrix().max_abs_diff(&h) < 1e-9);
        prop_assert!(s.energies().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn characteristic_is_bounded_and_conjugate_symmetric(dist in distribution(), omega in -50.0f64..50.0) {
        let phi = dist.centered_characteristic(omega);
        prop_assert!(phi.norm() <= 1.0 + 1e-12);
        prop_assert!((dist.centered_characteristic(-omega) - phi.conj()).norm() < 1e-12);
        prop_assert!((dist.centered_characteristic(0.0) - C64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(dist.dephasing_rate(omega) >= 0.0);
    }

    #[test]
    fn gaussian_rate_grows_with_gap(sigma in 0.01f64..2.0, a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let dist = TickDistribution::gaussian(PI, sigma).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-6);
        prop_assert!(dist.dephasing_rate(hi) > dist.dephasing_rate(lo));
    }

    #[test]
    fn channels_contract_coherences(dist in distribution(), seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_generator(dim, &mut rng);
        let ch = build_channel(&h, &dist);
        prop_assert!(ch.is_cptp().unwrap());
        let rho = random_mixed_state(dim, &mut rng);
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.matrix().hermiticity_error() < 1e-12);
        out.validate().unwrap();
        let before = h.to_eigenbasis(rho.matrix());
        let after = h.to_eigenbasis(out.matrix());
        for m in 0..dim {
            prop_assert!((before[(m, m)] - after[(m, m)]).norm() < 1e-12);
            for n in 0..dim {
                prop_assert!(after[(m, n)].norm() <= before[(m, n)].norm() + 1e-12);
            }
        }
    }

    #[test]
    fn single_gate_closed_form_matches_kraus(theta in 0.0f64..10.0, accuracy in 0.01f64..1e6) {
        let closed = single_gate_fidelity(theta, accuracy).unwrap();
        let kraus = qubit_dephasing_kraus(theta * theta / (2.0 * accuracy)).unwrap();
        prop_assert!((closed - average_gate_fidelity_from_kraus(&kraus, 2).unwrap().value()).abs() < 1e-14);
    }

    #[test]
    fn bound_monotone_with_limit(n in 1u32..30, l in 0u64..10_000, accuracy in 0.1f64..1e6) {
        let b = circuit_fidelity_bound(n, l, accuracy).unwrap();
        prop_assert!(b > 0.0 && b <= 1.0);
        prop_assert!(circuit_fidelity_bound(n, l + 1, accuracy).unwrap() <= b);
        prop_assert!(circuit_fidelity_bound(n, l, accuracy * 1.5).unwrap() >= b);
        let limit = 1.0 / (2f64.powi(n as i32) + 1.0);
        prop_assert!((circuit_fidelity_bound(n, u64::MAX / 2, accuracy).unwrap() - limit).abs() < 1e-12);
    }

    #[test]
    fn unitarity_is_multiplicative(l in 0u64..200, accuracy in 0.1f64..1e4) {
        let one = circuit_unitarity_gamma(1, accuracy).unwrap();
        let many = circuit_unitarity_gamma(l, accuracy).unwrap();
        prop_assert!((many - one.powi(l as i32)).abs() <= 1e-12 * one.powi(l as i32).max(1e-300));
    }

    #[test]
    fn required_accuracy_inverts_bound(n in 1u32..40, l in 3u64..1_000_000, f in 0.01f64..0.99) {
        match required_accuracy(n, l, f) {
            Ok(acc) => prop_assert!((circuit_fidelity_bound(n, l, acc).unwrap() - f).abs() < 1e-8),
            Err(_) => {
                let floor = tickq_core::metrics::accuracy_floor(n, l);
                prop_assert!(floor >= f);
            }
        }
    }

    #[test]
    fn cooling_monotone_and_bounded(
        r_s in 0.0f64..0.9,
        gap in 0.001f64..0.1,
        p_v in 0.01f64..0.99,
        sigma in 0.0f64..5.0,
        n in 0u64..500,
    ) {
        let r_v = (r_s + gap).min(1.0);
        let c = CoolingConfig::with_timer(r_s, r_v, p_v, sigma, PI).unwrap();
        let r = ground_population_after_n(&c, n);
        let next = ground_population_after_n(&c, n + 1);
        prop_assert!(next >= r && next <= r_v + 1e-15 && r >= r_s - 1e-15);
        let noisier = c.with_sigma(sigma + 0.5).unwrap();
        prop_assert!(ground_population_after_n(&noisier, n) <= r + 1e-15);
        let rate = cooling_rate(&c, n as f64, c.h()).unwrap();
        prop_assert!(rate > 0.0 || (rate == 0.0 && (1.0 - c.effective_swap_probability()).powi(n as i32) < 1e-300));
        prop_assert!(cooling_rate(&c, n as f64 + 1.0, c.h()).unwrap() <= rate);
    }

    #[test]
    fn noiseless_step_recovers_plain_swap(r_s in 0.0f64..0.9, gap in 0.0f64..0.1, p_v in 0.01f64..0.99) {
        let c = CoolingConfig::with_timer(r_s, r_s + gap, p_v, 0.0, PI).unwrap();
        let want = p_v * (r_s + gap) + (1.0 - p_v) * r_s;
        prop_assert!((ground_population_after_n(&c, 1) - want).abs() < 1e-15);
    }
}
