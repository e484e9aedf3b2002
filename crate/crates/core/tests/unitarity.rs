use evap_core::propagator::slice_amplitudes_with;
use evap_core::{
    slice_generator, slice_propagator, taylor_oracle, Limits, OccupationCount, Tolerances,
};
use proptest::prelude::*;

const THETAS: [f64; 3] = [1.0 / 25.0, 1.0 / 15.0, 0.5];

fn occ(k: usize) -> OccupationCount {
    OccupationCount::new(k).unwrap()
}

#[test]
fn orthogonal_up_to_the_cap() {
    for theta in THETAS {
        for k in 0..=200 {
            let gen = slice_generator(occ(k), theta, 1.0).unwrap();
            let prop = slice_propagator(&gen).unwrap();
            assert!(prop.orthogonality_defect() <= 1e-12, "k={k} θ={theta}");
            let u = slice_amplitudes_with(occ(k), &gen, &Tolerances::default(), &Limits::default())
                .unwrap();
            assert!(u.norm_error() <= 1e-12);
            // only j ≤ k is reachable
            assert_eq!(u.amplitudes().len(), k + 1);
        }
    }
}

#[test]
fn series_agrees_where_it_converges() {
    for theta in [1.0 / 25.0, 1.0 / 15.0] {
        for k in 0..=20 {
            let gen = slice_generator(occ(k), 1.0, theta).unwrap();
            let exact = slice_propagator(&gen).unwrap();
            let series = taylor_oracle(&gen, 40).unwrap();
            assert!(
                series.propagator.max_abs_diff(&exact) <= 1e-10,
                "k={k} θ={theta}"
            );
        }
    }
    // at θ = 0.5 the order-40 partial sum only converges for small k
    for k in 0..=8 {
        let gen = slice_generator(occ(k), 1.0, 0.5).unwrap();
        let exact = slice_propagator(&gen).unwrap();
        let series = taylor_oracle(&gen, 40).unwrap();
        assert!(series.propagator.max_abs_diff(&exact) <= 1e-10, "k={k}");
    }
}

#[test]
fn series_bound_flags_divergence() {
    let gen = slice_generator(occ(20), 1.0, 0.5).unwrap();
    let series = taylor_oracle(&gen, 40).unwrap();
    let exact = slice_propagator(&gen).unwrap();
    let err = series.propagator.max_abs_diff(&exact);
    assert!(err > 1.0);
    assert!(series.remainder_bound >= err);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn semigroup(k in 0usize..40, a in 0.0f64..0.5, b in 0.0f64..0.5) {
        let gen = slice_generator(occ(k), 1.0, 1.0).unwrap();
        let pa = slice_propagator(&gen.with_theta(a)).unwrap();
        let pb = slice_propagator(&gen.with_theta(b)).unwrap();
        let pab = slice_propagator(&gen.with_theta(a + b)).unwrap();
        prop_assert!(pa.compose(&pb).max_abs_diff(&pab) <= 1e-11);
    }

    #[test]
    fn inverse_is_transpose(k in 1usize..60, theta in 0.0f64..1.0) {
        let gen = slice_generator(occ(k), 1.0, 1.0).unwrap();
        let fwd = slice_propagator(&gen.with_theta(theta)).unwrap();
        let back = slice_propagator(&gen.with_theta(-theta)).unwrap();
        prop_assert!((fwd.matrix().transpose() - back.matrix()).amax() <= 1e-12);
    }
}
