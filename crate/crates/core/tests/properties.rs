use nalgebra::DMatrix;
use proptest::prelude::*;
use respond::curves::cgbz_curve;
use respond::disorder::summarize;
use respond::greens::analytic::classify_regime_on;
use respond::lattice::build_hamiltonian_trial;
use respond::roots::bloch_roots;
use respond::spectra::char_poly;
use respond::winding::winding_number;
use respond::{BoundaryKind, DisorderSpec, DisorderTarget, ModelParams, C64};

fn params() -> impl Strategy<Value = ModelParams> {
    (0.2..0.8f64, 0.9..1.5f64, 0.0..0.2f64, 3usize..40)
        .prop_map(|(t1, t2, delta, n)| ModelParams::real(t1, t2, delta, n))
}

fn omega() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_satisfy_vieta(p in params(), w in omega()) {
        let Ok(r) = bloch_roots(&p, w) else { return Ok(()) };
        prop_assert!(r.beta_a.norm() <= r.beta_b.norm());
        prop_assert!((r.beta_a * r.beta_b - p.r2()).norm() < 1e-12 * p.r2().norm());
        prop_assert!((r.beta_a + r.beta_b - w / p.t1).norm() < 1e-12 * (1.0 + (w / p.t1).norm()));
        prop_assert!((p.energy(r.beta_a) - w).norm() < 1e-10);
    }

    #[test]
    fn char_poly_is_the_determinant(p in params(), w in omega()) {
        let n = p.n_sites;
        let h = respond::lattice::build_hamiltonian(&p, BoundaryKind::Pobc, None).unwrap();
        let det = (DMatrix::from_diagonal_element(n, n, w) - h).determinant();
        let cp = char_poly(&p, w);
        prop_assert!((cp - det).norm() <= 1e-9 * det.norm().max(1e-300), "{cp} vs {det}");
    }

    #[test]
    fn ensemble_summary_ignores_order(mut v in prop::collection::vec(0.0..10.0f64, 1..200), seed in any::<u64>()) {
        let a = summarize(&v);
        let len = v.len();
        v.rotate_left((seed as usize) % len);
        v.reverse();
        prop_assert_eq!(a, summarize(&v));
        prop_assert!(a.0 <= a.2);
    }

    #[test]
    fn disorder_is_reproducible(seed in any::<u64>(), trial in 0u64..1000) {
        let p = ModelParams::baseline(12);
        let spec = DisorderSpec::new(DisorderTarget::Hoppings, 0.05, seed);
        let a = build_hamiltonian_trial(&p, BoundaryKind::Pobc, &spec, trial).unwrap();
        let b = build_hamiltonian_trial(&p, BoundaryKind::Pobc, &spec, trial).unwrap();
        let c = build_hamiltonian_trial(&p, BoundaryKind::Pobc, &spec, trial + 1).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_ne!(&a, &c);
        let clean = respond::lattice::build_hamiltonian(&p, BoundaryKind::Pobc, None).unwrap();
        prop_assert!((a - clean).iter().all(|d| d.norm() <= 0.05));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn regime_matches_winding(w in omega()) {
        let p = ModelParams::baseline(60);
        let c = cgbz_curve(&p, 1, 512).unwrap();
        let Ok(wn) = winding_number(&c, &p, w) else { return Ok(()) };
        let Ok(regime) = classify_regime_on(&c, &p, w) else { return Ok(()) };
        prop_assert_eq!(regime.winding(), wn.value);
    }
}
