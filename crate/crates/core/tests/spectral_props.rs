mod common;

use ceig::spectral::{self, RESIDUAL_TOL};
use ceig::{Error, PiezoTensor, Shift, SolverConfig};
use proptest::prelude::*;
use rayon::prelude::*;

fn tensor_strategy(n: usize) -> impl Strategy<Value = PiezoTensor> {
    prop::collection::vec(-2.0f64..2.0, n * n * n)
        .prop_map(move |raw| PiezoTensor::new(n, &raw, ceig::SymmetryMode::AutoSymmetrize).unwrap())
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_round_trip(a in tensor_strategy(3)) {
        let c = spectral::c_max_via_lift(&a, &cfg()).unwrap();
        let z = spectral::z_max(&a.lift(), &cfg()).unwrap();
        prop_assert!((c.lambda * c.lambda - z.lambda).abs() <= 1e-9 * z.lambda.max(1e-12));
        let (r1, r2) = c.residuals(&a).unwrap();
        prop_assert!(r1 <= RESIDUAL_TOL && r2 <= RESIDUAL_TOL);
        prop_assert!(z.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn largest_c_eigenvalue_dominates_form(a in tensor_strategy(3), seed in any::<u64>()) {
        let c = spectral::c_max_via_lift(&a, &cfg()).unwrap();
        for pair in common::unit_vectors(3, 40, seed).chunks(2) {
            let f = a.form_xayy(&pair[0], &pair[1]).unwrap();
            prop_assert!(f <= c.lambda + 1e-9);
        }
    }

    #[test]
    fn sign_family(a in tensor_strategy(3)) {
        let base = spectral::c_max_via_lift(&a, &cfg()).unwrap().lambda;
        let neg = spectral::c_max_via_lift(&a.scale(-1.0), &cfg()).unwrap().lambda;
        prop_assert!((base - neg).abs() <= 1e-9 * (1.0 + base));
        let scaled = spectral::c_max_via_lift(&a.scale(2.5), &cfg()).unwrap().lambda;
        prop_assert!((scaled - 2.5 * base).abs() <= 1e-9 * (1.0 + scaled));
    }

    #[test]
    fn lift_is_psd(a in tensor_strategy(3)) {
        let z = spectral::z_min(&a.lift(), &cfg()).unwrap();
        prop_assert!(z.lambda >= -1e-8);
    }

    #[test]
    fn z_min_max_ordered(a in tensor_strategy(3), b in tensor_strategy(3)) {
        let t = a.lift().sub(&b.lift()).unwrap();
        let lo = spectral::z_min(&t, &cfg()).unwrap();
        let hi = spectral::z_max(&t, &cfg()).unwrap();
        prop_assert!(lo.lambda <= hi.lambda + 1e-12);
        for y in common::unit_vectors(3, 50, 9) {
            let q = t.eval_quartic(&y).unwrap();
            prop_assert!(lo.lambda - 1e-9 <= q && q <= hi.lambda + 1e-9);
        }
    }

    #[test]
    fn alternating_agrees_with_lift(a in tensor_strategy(3)) {
        let l = spectral::c_max_via_lift(&a, &cfg()).unwrap();
        let alt = spectral::c_max_alternating(&a, &cfg()).unwrap();
        prop_assert!((l.lambda - alt.lambda).abs() <= 1e-6);
        let (r1, r2) = alt.residuals(&a).unwrap();
        prop_assert!(r1 <= RESIDUAL_TOL && r2 <= RESIDUAL_TOL);
    }
}

#[test]
fn deterministic_for_fixed_seed() {
    let a = common::random_tensor(4, 1.0, 3);
    let c = SolverConfig { seed: 11, ..cfg() };
    assert_eq!(
        spectral::c_max_via_lift(&a, &c).unwrap(),
        spectral::c_max_via_lift(&a, &c).unwrap()
    );
    assert_eq!(
        spectral::c_max_alternating(&a, &c).unwrap(),
        spectral::c_max_alternating(&a, &c).unwrap()
    );
}

#[test]
fn static_and_adaptive_shift_agree() {
    for seed in 0..20 {
        let a = common::random_tensor(3, 1.0, 500 + seed);
        let adaptive = spectral::c_max_via_lift(&a, &cfg()).unwrap().lambda;
        let fixed = spectral::c_max_via_lift(
            &a,
            &SolverConfig {
                shift: Shift::Static,
                max_iters: 200_000,
                ..cfg()
            },
        )
        .unwrap()
        .lambda;
        assert!((adaptive - fixed).abs() <= 1e-8, "seed {seed}: {adaptive} vs {fixed}");
    }
}

#[test]
fn higher_dimensions_round_trip() {
    for n in [2, 4, 5] {
        for seed in 0..10 {
            let a = common::random_tensor(n, 1.0, 900 + seed);
            let c = spectral::c_max_via_lift(&a, &cfg()).unwrap();
            let alt = spectral::c_max_alternating(&a, &cfg()).unwrap();
            assert!((c.lambda - alt.lambda).abs() <= 1e-6, "n = {n}, seed = {seed}");
            let (r1, r2) = c.residuals(&a).unwrap();
            assert!(r1 <= RESIDUAL_TOL && r2 <= RESIDUAL_TOL);
        }
    }
}

#[test]
fn zero_tensor_has_zero_eigenvalue() {
    let a = PiezoTensor::zeros(3).unwrap();
    let c = spectral::c_max_via_lift(&a, &cfg()).unwrap();
    assert_eq!(c.lambda, 0.0);
    assert!((ceig::linalg::norm2(&c.x) - 1.0).abs() < 1e-12);
    assert!((ceig::linalg::norm2(&c.y) - 1.0).abs() < 1e-12);
}

#[test]
fn single_entry_tensor() {
    let a = PiezoTensor::from_entries(3, &[((1, 2, 2), -1.5)]).unwrap();
    let c = spectral::c_max_via_lift(&a, &cfg()).unwrap();
    assert!((c.lambda - 1.5).abs() < 1e-12);
    let (r1, r2) = c.residuals(&a).unwrap();
    assert!(r1 <= RESIDUAL_TOL && r2 <= RESIDUAL_TOL);
}

#[test]
fn invalid_config_rejected() {
    let a = common::random_tensor(3, 1.0, 1);
    let bad = SolverConfig { tol: -1.0, ..cfg() };
    assert!(matches!(
        spectral::c_max_via_lift(&a, &bad),
        Err(Error::InvalidConfig(_))
    ));
    assert!(matches!(
        spectral::grid_oracle_c(&common::random_tensor(4, 1.0, 1), 100),
        Err(Error::UnsupportedDimension { n: 4 })
    ));
}

#[test]
fn solvers_match_grid_oracles() {
    let failures: Vec<String> = (0..24u64)
        .into_par_iter()
        .filter_map(|seed| {
            let a = common::random_tensor(3, 1.0, 7_000 + seed);
            let lam = spectral::c_max_via_lift(&a, &cfg()).unwrap().lambda;
            let grid = spectral::grid_oracle_c(&a, 400).unwrap();
            let (zmin, zmax) = spectral::grid_oracle_z(&a.lift(), 200).unwrap();
            let ok = lam >= grid - 1e-12
                && lam - grid <= 5e-3
                && (zmax - lam * lam).abs() <= 5e-2 * (1.0 + zmax)
                && zmin >= -1e-12;
            (!ok).then(|| format!("seed {seed}: {lam} vs grid {grid}, zmax {zmax}"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn grid_oracles_share_nodes() {
    for seed in 0..10 {
        let a = common::random_tensor(3, 1.0, 7_500 + seed);
        let c = spectral::grid_oracle_c(&a, 150).unwrap();
        let (_, zmax) = spectral::grid_oracle_z(&a.lift(), 150).unwrap();
        assert!((c - zmax.sqrt()).abs() <= 1e-9, "seed {seed}: {c} vs {}", zmax.sqrt());
    }
}
