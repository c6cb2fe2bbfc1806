use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plap::cheeger::cheeger_exact;
use plap::fixtures::random_linear_graph;
use plap::linear::{
    annulus_identities_hold, build_linear, cheeger_at_infinity, cheeger_linear, estimate_limit, model_report,
    rapidly_branching_check, sphere_partition_consistency, tree_cheeger, Branching, LimitStatus, ModelSpec,
    ModelValue, Scheme,
};
use plap::rational::ratio;

#[test]
fn ball_and_annulus_ratios_match_path_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let graph = random_linear_graph(&mut rng, 8);
        assert!(annulus_identities_hold(&graph));
        for r in 0..8 {
            let ball = graph.domain(true, r + 1).unwrap();
            let direct = ball.total_boundary_weight() / ball.total_volume();
            assert_eq!(graph.ball_ratio(r).unwrap().as_rational(), Some(direct));
        }
        for r in 1..8 {
            let annulus = graph.domain(false, r).unwrap();
            let direct = annulus.total_boundary_weight() / annulus.total_volume();
            assert_eq!(graph.annulus_ratio(0, r).unwrap().as_rational(), Some(direct));
        }
    }
}

#[test]
fn finite_minimum_bounds_the_exact_path_constant() {
    // Balls are among the subsets the exact search visits.
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let graph = random_linear_graph(&mut rng, 7);
        let linear = cheeger_linear(&graph, true).unwrap();
        let exact = cheeger_exact(&graph.domain(true, 8).unwrap()).unwrap();
        assert!(exact.h <= linear.finite_min.as_rational().unwrap());
    }
}

#[test]
fn regular_tree_constants() {
    let physical = model_report(&ModelSpec::tree(Branching::Constant(2), Scheme::Physical).unwrap(), 60).unwrap();
    // Ball ratios 2^(r+1) / (2^(r+1) - 1) decrease to 1 without reaching it.
    let r = 61u32;
    let last = ratio(1, 1) + ratio(1, 1) / (plap::Rational::from_integer(2.into()).pow(r as i32) - ratio(1, 1));
    assert_eq!(physical.h.finite_min.as_rational(), Some(last));
    assert!((physical.h.value - 1.0).abs() < 1e-9);
    assert!((physical.h_infinity.converged().unwrap() - 1.0).abs() < 1e-9);

    let normalized = model_report(&ModelSpec::tree(Branching::Constant(2), Scheme::Normalized).unwrap(), 200).unwrap();
    assert!((normalized.h_infinity.converged().unwrap() - 1.0 / 3.0).abs() < 1e-9);

    for scheme in [Scheme::Physical, Scheme::Normalized, Scheme::Modified] {
        assert!(tree_cheeger(&Branching::Constant(3), scheme, 30).unwrap().agrees());
        assert!(tree_cheeger(&Branching::List(vec![1, 2, 5]), scheme, 30).unwrap().agrees());
    }
}

#[test]
fn antitree_physical_constant_diverges() {
    let report = model_report(&ModelSpec::antitree(2, Scheme::Physical).unwrap(), 200).unwrap();
    assert_eq!(report.h_value(), ModelValue::Finite(4.0));
    assert_eq!(report.h_infinity_value(), ModelValue::Infinite);
}

#[test]
fn explicit_spheres_reduce_to_the_linear_graph() {
    for spec in [
        ModelSpec::antitree(1, Scheme::Physical).unwrap(),
        ModelSpec::antitree(2, Scheme::Normalized).unwrap(),
        ModelSpec::tree(Branching::List(vec![2, 3]), Scheme::Physical).unwrap(),
    ] {
        assert!(sphere_partition_consistency(&spec, 3).unwrap().matches, "{spec:?}");
    }
}

#[test]
fn growing_branching_tends_to_one() {
    let check = rapidly_branching_check(&Branching::Arithmetic { first: 1, step: 1 }, 40).unwrap();
    assert!(check.sequences_agree);
    let graph = build_linear(
        &ModelSpec::tree(Branching::Arithmetic { first: 1, step: 1 }, Scheme::Normalized).unwrap(),
        40,
    )
    .unwrap();
    let limit = cheeger_at_infinity(&graph).unwrap();
    assert!((limit.converged().unwrap() - 1.0).abs() < 1e-3, "{limit:?} {check:?}");
}

#[test]
fn limit_estimates() {
    let settled: Vec<f64> = (1..=200).map(|n| 0.5 + 1.0 / f64::from(n).powi(3)).collect();
    let e = estimate_limit(&settled, 1);
    assert_eq!(e.status, LimitStatus::Converged);
    assert!((e.value.unwrap() - 0.5).abs() < 1e-6);

    let growing: Vec<f64> = (1..=200).map(f64::from).collect();
    assert!(estimate_limit(&growing, 1).diverges());

    let oscillating: Vec<f64> = (0..200).map(|n| if n % 2 == 0 { 1.0 } else { 2.0 }).collect();
    assert!(estimate_limit(&oscillating, 0).converged().is_none());
}
