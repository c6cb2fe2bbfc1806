use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plap::cheeger::{cheeger_bounds_report, cheeger_exact, coarea_verify, lambda_1_1};
use plap::fixtures::{pendant_triangle_domain, path5_domain, random_domain, singleton, star_domain};
use plap::rational::{int, ratio};
use plap::spectral::SolverConfig;
use plap::symmetry::{enumerate_automorphisms, orbits};
use plap::{DirichletDomain, Rational, VertexSet};

/// `|dU| / |U|` accumulated straight from the edge list.
fn ratio_of(domain: &DirichletDomain, mask: u32) -> Rational {
    let inside = |x: usize| mask >> x & 1 == 1;
    let mut boundary = Rational::zero();
    let mut volume = Rational::zero();
    for x in (0..domain.len()).filter(|&x| inside(x)) {
        boundary += domain.boundary_weights()[x].clone();
        volume += domain.nu(x).clone();
    }
    for (i, j, w) in domain.edges() {
        if inside(i) != inside(j) {
            boundary += w.clone();
        }
    }
    boundary / volume
}

fn brute_force(domain: &DirichletDomain) -> (Rational, Vec<VertexSet>) {
    let n = domain.len();
    let mut best: Option<Rational> = None;
    let mut cuts = Vec::new();
    for mask in 1u32..(1 << n) {
        let q = ratio_of(domain, mask);
        let set: VertexSet = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
        match &best {
            Some(b) if q > *b => {}
            Some(b) if q == *b => cuts.push(set),
            _ => {
                best = Some(q);
                cuts = vec![set];
            }
        }
    }
    cuts.sort();
    (best.unwrap(), cuts)
}

#[test]
fn exact_constant_matches_independent_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..40 {
        let size = rng.gen_range(1..=8);
        let domain = random_domain(&mut rng, size, trial % 3 == 0, trial % 2 == 0);
        let result = cheeger_exact(&domain).unwrap();
        let (h, cuts) = brute_force(&domain);
        assert_eq!(result.h, h, "trial {trial}");
        assert_eq!(result.cuts, cuts, "trial {trial}");
        assert_eq!(result.subsets_examined, (1u64 << size) - 1);
    }
}

#[test]
fn known_constants() {
    assert_eq!(cheeger_exact(&singleton(int(2), int(5))).unwrap().h, ratio(5, 2));
    let path = cheeger_exact(&path5_domain()).unwrap();
    assert_eq!(path.h, ratio(1, 3));
    assert_eq!(path.cuts, vec![(0..3).collect::<VertexSet>()]);
    // Every leaf loses half its measure; the center has no boundary edge.
    assert_eq!(cheeger_exact(&star_domain()).unwrap().h, ratio(4, 12));
    assert_eq!(lambda_1_1(&path5_domain()).unwrap(), ratio(1, 3));
}

#[test]
fn closed_domain_has_zero_constant() {
    let domain = pendant_triangle_domain();
    assert!(domain.total_boundary_weight().is_zero());
    let result = cheeger_exact(&domain).unwrap();
    assert!(result.h.is_zero());
    assert!(result.cuts.contains(&(0..domain.len()).collect()));
}

#[test]
fn orbit_restriction_agrees_on_symmetric_domains() {
    for domain in [path5_domain(), star_domain()] {
        let partition = orbits(&enumerate_automorphisms(&domain, 12).unwrap());
        let full = cheeger_exact(&domain).unwrap();
        let restricted = plap::cheeger::cheeger_orbit_restricted(&domain, &partition, 24).unwrap();
        assert_eq!(full.h, restricted.h);
        assert!(restricted.subsets_examined < full.subsets_examined);
    }
}

#[test]
fn coarea_identities_hold_for_random_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..30 {
        let size = rng.gen_range(1..=7);
        let domain = random_domain(&mut rng, size, false, false);
        // Coarse values so that level sets repeat.
        let f: Vec<f64> = (0..size).map(|_| f64::from(rng.gen_range(-3..=3))).collect();
        if f.iter().all(|&x| x == 0.0) {
            continue;
        }
        let report = coarea_verify(&domain, &f).unwrap();
        assert!(report.holds, "{report:?}");
        assert!((report.energy - report.level_boundary_sum).abs() < 1e-12 * report.energy.max(1.0));
        assert!((report.norm - report.level_volume_sum).abs() < 1e-12 * report.norm.max(1.0));
        assert!(report.energy <= report.energy_of_f + 1e-12);
    }
}

#[test]
fn eigenvalue_upper_bound_holds_on_normalized_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let cfg = SolverConfig::default();
    for _ in 0..6 {
        let size = rng.gen_range(2..=6);
        let domain = random_domain(&mut rng, size, true, false);
        let report = cheeger_bounds_report(&domain, &[1.5, 2.0, 3.0], &cfg).unwrap();
        for row in &report.rows {
            assert!(row.upper_holds, "{row:?}");
            assert!(row.lambda <= row.h + 1e-12);
        }
    }
}
