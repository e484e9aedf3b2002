//! The Markov chain against the exact path state.

use evap_core::oracle::blackhole_distribution;
use evap_core::{
    evolve_full, propagate, radiation_overlap, reduced_blackhole, reduced_radiation,
    transition_matrix, Limits, LogBase, OccupationCount, OccupationDistribution, Tolerances,
};

fn occ(n: usize) -> OccupationCount {
    OccupationCount::new(n).unwrap()
}

fn max_dev(a: &OccupationDistribution, b: &OccupationDistribution) -> f64 {
    a.probabilities()
        .iter()
        .zip(b.probabilities())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn chain_matches_oracle_diagonal() {
    for theta in [1.0 / 15.0, 0.3] {
        for n in 0..=3 {
            let t = transition_matrix(occ(n), 1.0, theta).unwrap();
            let start = OccupationDistribution::delta(occ(n), n).unwrap();
            let chain = propagate(&t, &start, 12).unwrap();
            for slices in 0..=12 {
                let ps = evolve_full(occ(n), 1.0, theta, slices).unwrap();
                let rho = reduced_blackhole(&ps);
                assert_eq!(rho.max_off_diagonal(), 0.0);
                let dev = max_dev(&blackhole_distribution(&ps), &chain.distributions[slices]);
                assert!(dev <= 1e-10, "n={n} N={slices} θ={theta}: {dev:e}");
            }
        }
    }
}

#[test]
fn three_quanta_eight_slices() {
    let ps = evolve_full(occ(3), 1.0, 1.0 / 15.0, 8).unwrap();
    let t = transition_matrix(occ(3), 1.0, 1.0 / 15.0).unwrap();
    let start = OccupationDistribution::delta(occ(3), 3).unwrap();
    let chain = propagate(&t, &start, 8).unwrap();
    assert!(max_dev(&blackhole_distribution(&ps), &chain.distributions[8]) <= 1e-10);
}

#[test]
fn marginal_entropies_coincide() {
    let limits = Limits::default();
    for n in 1..=3 {
        let base = LogBase::for_occupation(occ(n));
        for slices in 1..=10 {
            let ps = evolve_full(occ(n), 1.0, 0.3, slices).unwrap();
            let a = reduced_blackhole(&ps).entropy(base).unwrap();
            let bc = reduced_radiation(&ps, &limits)
                .unwrap()
                .entropy(base)
                .unwrap();
            assert!((a - bc).abs() <= 1e-10, "n={n} N={slices}");
        }
    }
}

#[test]
fn single_quantum_purity_follows_closed_form() {
    let tol = Tolerances::default();
    let limits = Limits::default();
    let n = OccupationCount::new(1).unwrap();
    let theta: f64 = 1.0 / 15.0;
    for slices in [10, 100, 1000] {
        let purity = radiation_overlap(n, 1, 1, 1.0, theta, slices, &tol, &limits).unwrap();
        let stay = theta.cos().powi(2 * slices as i32);
        let want = stay * stay + (1.0 - stay) * (1.0 - stay);
        assert!(
            (purity - want).abs() < 1e-12,
            "N={slices}: {purity} vs {want}"
        );
    }
    let late = radiation_overlap(n, 1, 1, 1.0, theta, 1000, &tol, &limits).unwrap();
    assert!(late > 0.95);
    let overlap = radiation_overlap(n, 0, 1, 1.0, theta, 1000, &tol, &limits).unwrap();
    assert!(overlap < 0.05);
}
