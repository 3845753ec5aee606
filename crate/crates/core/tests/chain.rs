mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qst_disorder_lab::ensemble::realization_stream;
use qst_disorder_lab::*;

fn disordered(n: usize, sigma: f64, seed: u64) -> (ChainSpec, RealizedHamiltonian) {
    let spec = ChainSpec::pst(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = realize_disorder(&spec, &DisorderSpec::new(sigma, sigma).unwrap(), &mut rng);
    (spec, h)
}

#[test]
fn seeded_realization_is_bit_exact() {
    let spec = ChainSpec::pst(4).unwrap();
    let mut stream = realization_stream(2013, 0);
    let h = realize_disorder(&spec, &DisorderSpec::new(0.1, 0.1).unwrap(), &mut stream);
    let bits: Vec<u64> = h
        .diag
        .iter()
        .chain(&h.offdiag)
        .map(|x| x.to_bits())
        .collect();
    assert_eq!(
        bits,
        vec![
            0x3fac2b9a41dc32d2,
            0x3f816282b00dc47c,
            0x3faf61cc11299977,
            0xbf83998bf4048932,
            0x3fef1ac8e9e5d80e,
            0x3fed43239b093392,
            0x3ff04b5c1b44765c,
        ]
    );
}

#[test]
fn perfect_transfer_for_all_short_chains() {
    for n in 2..=64 {
        let spec = ChainSpec::pst(n).unwrap();
        let a = transfer_amplitude(&spec.ideal_hamiltonian(), spec.readout_time()).unwrap();
        assert!(a.norm_sqr() >= 1.0 - 1e-10, "N={n}: p={}", a.norm_sqr());
        assert!((a.norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn ideal_spectrum_is_equally_spaced() {
    for n in 3..=32 {
        let spec = ChainSpec::pst(n).unwrap();
        let sd = eigendecompose(&spec.ideal_hamiltonian()).unwrap();
        let k = n / 2;
        let gap = 2.0 / ((k * (n - k)) as f64).sqrt();
        for w in sd.eigenvalues.windows(2) {
            assert!((w[1] - w[0] - gap).abs() < 1e-12, "N={n}");
        }
    }
}

#[test]
fn decomposition_identities() {
    for seed in 0..40 {
        let n = 2 + (seed as usize % 15);
        let (_, h) = disordered(n, 0.3, seed);
        let sd = eigendecompose(&h).unwrap();
        assert!(sd.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n)
                    .map(|i| sd.eigenvectors[a][i] * sd.eigenvectors[b][i])
                    .sum();
                let delta = if a == b { 1.0 } else { 0.0 };
                assert!((dot - delta).abs() < 1e-10);
            }
        }
        let dense = h.to_dense();
        let rec = sd.reconstruct();
        for i in 0..n {
            for j in 0..n {
                assert!((dense[i][j] - rec[i][j]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn seeded_disorder_spoils_transfer_and_matches_expm() {
    let (spec, h) = disordered(12, 0.1, 77);
    let t = spec.readout_time();
    let a = transfer_amplitude(&h, t).unwrap();
    assert!(a.norm_sqr() < 1.0);
    let u = common::propagator(&h.to_dense(), t);
    let want = u[11][0];
    assert!(
        (a.re - want.re).abs() < 1e-9 && (a.im - want.im).abs() < 1e-9,
        "{a} vs {want}"
    );
}

#[test]
fn full_and_end_row_paths_agree() {
    for seed in 0..20 {
        let (spec, h) = disordered(20, 0.2, seed);
        let t = spec.readout_time();
        let fast = transfer_amplitude(&h, t).unwrap();
        let full = eigendecompose(&h).unwrap().propagator_element(19, 0, t);
        assert!((fast - full).norm() < 1e-13);
    }
}

#[test]
fn zero_disorder_mirror_symmetry() {
    for n in [5usize, 8, 13] {
        let spec = ChainSpec::pst(n).unwrap();
        let sd = eigendecompose(&spec.ideal_hamiltonian()).unwrap();
        for step in 0..25 {
            let t = step as f64 * spec.readout_time() / 12.0;
            // relabel k -> N+1-k: the wave launched from site N mirrors the one from site 1
            for j in 0..n {
                let from_first = sd.propagator_element(j, 0, t).norm();
                let from_last = sd.propagator_element(n - 1 - j, n - 1, t).norm();
                assert!((from_first - from_last).abs() < 1e-12, "N={n} j={j}");
            }
        }
        let reversed = RealizedHamiltonian::new(
            spec.ideal_hamiltonian().diag.into_iter().rev().collect(),
            spec.couplings().iter().rev().cloned().collect(),
        )
        .unwrap();
        for step in 0..10 {
            let t = step as f64 * 0.7;
            let a = transfer_amplitude(&spec.ideal_hamiltonian(), t)
                .unwrap()
                .norm();
            let b = transfer_amplitude(&reversed, t).unwrap().norm();
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn phase_fixture_against_closed_form() {
    // (−i)^{N−1}: N=2 → −π/2, N=5 → 0, N=12 → π/2.
    let cases = [
        (2, -std::f64::consts::FRAC_PI_2),
        (5, 0.0),
        (12, std::f64::consts::FRAC_PI_2),
    ];
    for (n, want) in cases {
        let got = ideal_phase(&ChainSpec::pst(n).unwrap()).unwrap();
        assert!(wrap_phase(got - want).abs() < 1e-10, "N={n}: {got}");
    }
}

#[test]
fn dimensionless_scale() {
    let spec = ChainSpec::pst(12).unwrap();
    assert!((spec.coupling_scale() - 1.0 / 6.0).abs() < 1e-15);
    assert!(
        (spec.coupling_scale() * spec.readout_time() - std::f64::consts::FRAC_PI_2).abs() < 1e-14
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn amplitude_matches_dense_oracle(n in 2usize..=16, seed in any::<u64>(), sigma in 0.0f64..0.4) {
        let (spec, h) = disordered(n, sigma, seed);
        let t = spec.readout_time();
        let a = transfer_amplitude(&h, t).unwrap();
        let u = common::propagator(&h.to_dense(), t);
        let want = u[n - 1][0];
        prop_assert!((a.re - want.re).abs() < 1e-9);
        prop_assert!((a.im - want.im).abs() < 1e-9);
    }

    #[test]
    fn unitarity_of_first_column(n in 2usize..=24, seed in any::<u64>(), t in 0.0f64..30.0) {
        let (_, h) = disordered(n, 0.25, seed);
        let col = eigendecompose(&h).unwrap().evolve_site(0, t);
        let total: f64 = col.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let a = transfer_amplitude(&h, t).unwrap();
        prop_assert!(a.norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn diagonal_shift_is_a_global_phase(n in 2usize..=20, seed in any::<u64>(), c in -2.0f64..2.0) {
        let (spec, h) = disordered(n, 0.15, seed);
        let t = spec.readout_time();
        let shifted = RealizedHamiltonian::new(
            h.diag.iter().map(|d| d + c).collect(),
            h.offdiag.clone(),
        ).unwrap();
        let a = transfer_amplitude(&h, t).unwrap();
        let b = transfer_amplitude(&shifted, t).unwrap();
        // exp(−i(H + c)t) = e^{−ict} exp(−iHt)
        let expected = a * Complex64::cis(-c * t);
        prop_assert!((b - expected).norm() < 1e-10);
        prop_assert!((b.norm_sqr() - a.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn outcome_ranges(n in 2usize..=30, seed in any::<u64>(), sigma in 0.0f64..1.5) {
        let (spec, h) = disordered(n, sigma, seed);
        let phi0 = ideal_phase(&spec).unwrap();
        let o = transfer_outcome(&h, spec.readout_time(), phi0).unwrap();
        prop_assert!((0.0..=1.0).contains(&o.p));
        prop_assert!(o.delta_phi > -std::f64::consts::PI && o.delta_phi <= std::f64::consts::PI);
        prop_assert!(o.phi > -std::f64::consts::PI && o.phi <= std::f64::consts::PI);
    }
}
