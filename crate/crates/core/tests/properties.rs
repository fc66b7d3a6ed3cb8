//! Invariants of the approximation and kernel routines under random inputs.

use std::f64::consts::PI;

use hardy_bap::*;
use proptest::prelude::*;

fn grid_opts() -> SolveOptions {
    SolveOptions {
        m_grid: 256,
        ..SolveOptions::default()
    }
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(complex(), 1..=max_degree + 1).prop_map(PowerSeries::polynomial)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling(f in polynomial(12), c in complex(), n in 1usize..5, sup in any::<bool>()) {
        prop_assume!(c.norm() > 1e-3);
        let q = if sup { HardyExponent::Infinity } else { HardyExponent::One };
        let base = best_approx(&f, n, q, &grid_opts()).unwrap();
        let scaled = best_approx(&f.scale(c), n, q, &grid_opts()).unwrap();
        prop_assert!(rel_close(scaled.value, c.norm() * base.value, 1e-9),
            "{} vs {}", scaled.value, c.norm() * base.value);
    }

    #[test]
    fn rotation(f in polynomial(12), step in 0usize..256, n in 1usize..5) {
        let phase = C64::from_polar(1.0, 2.0 * PI * step as f64 / 256.0);
        let rotated = PowerSeries::polynomial(
            f.coeffs().iter().enumerate().map(|(k, a)| a * phase.powu(k as u32)).collect(),
        );
        let a = best_approx(&f, n, HardyExponent::Infinity, &grid_opts()).unwrap();
        let b = best_approx(&rotated, n, HardyExponent::Infinity, &grid_opts()).unwrap();
        prop_assert!(rel_close(a.value, b.value, 1e-9), "{} vs {}", a.value, b.value);
    }

    #[test]
    fn distance_decreases_with_order(f in polynomial(10), n in 0usize..6) {
        for q in HardyExponent::ALL {
            let a = best_approx(&f, n, q, &grid_opts()).unwrap().value;
            let b = best_approx(&f, n + 1, q, &grid_opts()).unwrap().value;
            prop_assert!(b <= a + 1e-7, "q = {q}: {b} > {a}");
        }
    }

    #[test]
    fn results_respect_contracts(f in polynomial(15), n in 0usize..6) {
        for q in HardyExponent::ALL {
            let res = best_approx(&f, n, q, &grid_opts()).unwrap();
            prop_assert!(res.lower_bound >= 0.0);
            prop_assert!(res.lower_bound <= res.value + 1e-9 * (1.0 + res.value));
            prop_assert!(res.gap <= 1e-5, "q = {q}: gap {}", res.gap);
            prop_assert!(res.approximant.truncation() < n.max(1));
            prop_assert!(f.coeff(n).norm() <= res.value + 1e-7);
        }
    }

    #[test]
    fn hadamard_is_commutative(f in polynomial(20), g in polynomial(20)) {
        prop_assert_eq!(hadamard(&f, &g), hadamard(&g, &f));
    }

    #[test]
    fn series_json_round_trip(f in polynomial(20)) {
        let json = serde_json::to_string(&f).unwrap();
        let back: PowerSeries = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn fourier_recovers_polynomials(f in polynomial(30), r in 0.3..1.0f64) {
        let grid = sample_boundary(&f, r, 128).unwrap();
        let back = fourier_coefficients(&grid);
        for k in 0..=f.truncation() {
            prop_assert!((back.coeff(k) - f.coeff(k)).norm() < 1e-9 / r.powi(k as i32));
        }
    }

    #[test]
    fn convolution_bound_below_distance(f in polynomial(12), n in 1usize..4, extra in 1usize..4) {
        let kernel = KernelSpec::geometric(n, n + extra).unwrap();
        let tf = TestFunction::from(f.clone());
        let lb = convolution_lower_bound(&kernel, &tf, HardyExponent::Infinity, &grid_opts()).unwrap();
        let e = best_approx(&f, n, HardyExponent::Infinity, &grid_opts()).unwrap();
        prop_assert!(lb <= e.value + 1e-6, "{lb} > {}", e.value);
    }

    #[test]
    fn roots_of_unity_kernels_certify(n in 0usize..4, extra in 1usize..5, rot in 0.0..2.0 * PI) {
        let mu = DiscreteMeasure::roots_of_unity(n + extra, rot).unwrap();
        prop_assert!(moment_check(&mu, n) < 1e-12);
        let kernel = kernel_from_measure(n, mu).unwrap();
        let cfg = SweepConfig { m_grid: 1024, ..SweepConfig::default() };
        prop_assert!(certify_bap(&kernel, &cfg).unwrap().verdict.is_pass());
    }
}

#[test]
fn mixed_distance_shrinks_with_conjugate_degree() {
    let f = PowerSeries::polynomial(vec![
        C64::new(0.2, 0.1),
        C64::new(-0.4, 0.3),
        C64::new(1.0, 0.0),
        C64::new(0.3, -0.6),
        C64::new(0.8, 0.2),
        C64::new(-0.5, 0.5),
    ]);
    let mut last = f64::INFINITY;
    for neg in [1, 2, 4, 8] {
        let opts = SolveOptions {
            m_grid: 256,
            neg_degree: neg,
            ..SolveOptions::default()
        };
        let v = mixed_approx_l1(&f, 2, &opts).unwrap().value;
        assert!(v <= last + 1e-7);
        assert!(v >= f.coeff(2).norm() - 1e-7);
        last = v;
    }
}

#[test]
fn measure_kernel_matches_rotated_evaluation() {
    let mu = DiscreteMeasure::new(vec![
        (C64::from_polar(1.0, 0.0), 0.25),
        (C64::from_polar(1.0, PI / 2.0), 0.25),
        (C64::from_polar(1.0, PI), 0.25),
        (C64::from_polar(1.0, 1.5 * PI), 0.25),
    ])
    .unwrap();
    let kernel = kernel_from_measure(2, mu.clone()).unwrap();
    let f = PowerSeries::from_real(&[1.0, -2.0, 0.5, 0.25, 3.0, -1.0, 0.125]);
    let image = apply_operator(&kernel, &f).unwrap();
    for z in [C64::new(0.3, 0.2), C64::new(-0.7, 0.1), C64::new(0.0, -0.9)] {
        let direct: C64 = mu
            .atoms()
            .iter()
            .map(|&(t, w)| w * t.powu(2) * evaluate(&f, t.conj() * z).unwrap())
            .sum();
        assert!((evaluate(&image, z).unwrap() - direct).norm() < 1e-13);
    }
}
