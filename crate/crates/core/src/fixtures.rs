//! Small graphs used by the tests, the CLI harness and the acceptance checks.

use rand::Rng;

use crate::graph::{DirichletDomain, WeightedGraph};
use crate::linear::LinearGraph;
use crate::rational::{int, ratio, Rational};

fn expect<T>(r: crate::Result<T>) -> T {
    r.expect("fixture data is well formed")
}

/// Path `v0 - v1 - v2 - v3 - v4` with unit weights and `nu = deg`.
pub fn path5() -> WeightedGraph {
    expect(WeightedGraph::unit_normalized(
        &["v0", "v1", "v2", "v3", "v4"],
        &[("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v4")],
    ))
}

/// Interior `{v1, v2, v3}` of [`path5`].
pub fn path5_domain() -> DirichletDomain {
    expect(DirichletDomain::build(&path5(), &["v1", "v2", "v3"]))
}

/// A pendant path `v1 - v2 - v3` attached to the triangle `v3 v4 v5`,
/// unit weights, `nu = deg`.
pub fn pendant_triangle() -> WeightedGraph {
    expect(WeightedGraph::unit_normalized(
        &["v1", "v2", "v3", "v4", "v5"],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v3", "v5"), ("v4", "v5")],
    ))
}

pub fn pendant_triangle_domain() -> DirichletDomain {
    let g = pendant_triangle();
    let all: Vec<&str> = g.ids().iter().map(String::as_str).collect();
    expect(DirichletDomain::build(&g, &all))
}

/// One interior vertex with measure `nu` and boundary weight `boundary`.
pub fn singleton(nu: Rational, boundary: Rational) -> DirichletDomain {
    expect(DirichletDomain::new(vec!["x".into()], vec![nu], vec![], vec![boundary]))
}

/// Center `c` joined to leaves `l1..l4` by unit spokes; each leaf also has a
/// unit edge to the outside. `nu = deg`.
pub fn star_domain() -> DirichletDomain {
    let ids = ["c", "l1", "l2", "l3", "l4"];
    expect(DirichletDomain::new(
        ids.iter().map(|s| s.to_string()).collect(),
        vec![int(4), int(2), int(2), int(2), int(2)],
        (1..5).map(|k| (0, k, int(1))).collect(),
        vec![int(0), int(1), int(1), int(1), int(1)],
    ))
}

/// Triangle with unit weights and unit boundary weight on every vertex, `nu = deg`.
pub fn triangle_domain() -> DirichletDomain {
    expect(DirichletDomain::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![int(3), int(3), int(3)],
        vec![(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))],
        vec![int(1), int(1), int(1)],
    ))
}

fn random_weight(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

/// A connected domain `w0..w{size-1}` inside a graph with one or two outside
/// vertices `o0, o1`, random rational edge weights and at least one boundary
/// edge. With `normalized` the measure is the weighted degree, otherwise a
/// random rational. With `bipartite` the interior edges respect a random
/// two-colouring.
pub fn random_domain(rng: &mut impl Rng, size: usize, normalized: bool, bipartite: bool) -> DirichletDomain {
    assert!(size >= 1, "a domain needs a vertex");
    let inner = |i: usize| format!("w{i}");
    let outer = |j: usize| format!("o{j}");
    let outside = rng.gen_range(1..=2);
    let mut colour: Vec<bool> = (0..size).map(|_| rng.gen_bool(0.5)).collect();
    let mut edges: Vec<(String, String, Rational)> = Vec::new();
    for i in 1..size {
        let candidates: Vec<usize> = (0..i).filter(|&j| !bipartite || colour[j] != colour[i]).collect();
        let parent = if candidates.is_empty() {
            colour[i] = !colour[0];
            0
        } else {
            candidates[rng.gen_range(0..candidates.len())]
        };
        edges.push((inner(parent), inner(i), random_weight(rng)));
    }
    for i in 0..size {
        for j in (i + 1)..size {
            let tree_edge = edges.iter().any(|(a, b, _)| *a == inner(i) && *b == inner(j));
            if !tree_edge && (!bipartite || colour[i] != colour[j]) && rng.gen_bool(0.25) {
                edges.push((inner(i), inner(j), random_weight(rng)));
            }
        }
    }
    for j in 0..outside {
        let mut attached = false;
        for i in 0..size {
            if rng.gen_bool(0.3) {
                edges.push((inner(i), outer(j), random_weight(rng)));
                attached = true;
            }
        }
        if !attached {
            let i = rng.gen_range(0..size);
            edges.push((inner(i), outer(j), random_weight(rng)));
        }
    }
    let ids: Vec<String> = (0..size).map(inner).chain((0..outside).map(outer)).collect();
    let graph = if normalized {
        expect(WeightedGraph::with_degree_measure(ids, edges))
    } else {
        let vertices = ids.into_iter().map(|id| (id, random_weight(rng))).collect();
        expect(WeightedGraph::new(vertices, edges))
    };
    let omega: Vec<String> = (0..size).map(inner).collect();
    expect(DirichletDomain::build(&graph, &omega))
}

/// Random positive rational sequences `nu_0..=nu_horizon`, `mu_0..=mu_horizon`.
pub fn random_linear_graph(rng: &mut impl Rng, horizon: usize) -> LinearGraph {
    let nu = (0..=horizon).map(|_| random_weight(rng)).collect();
    let mu = (0..=horizon).map(|_| random_weight(rng)).collect();
    expect(LinearGraph::from_rationals(nu, mu))
}
