use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plap::fixtures::{pendant_triangle, path5, path5_domain, random_domain, triangle_domain};
use plap::rational::{int, ratio};
use plap::{build_domain, Bipartition, DirichletDomain, Error, VertexSet, WeightedGraph};

#[test]
fn degree_measure_and_boundary_of_the_path() {
    let graph = path5();
    assert_eq!(graph.len(), 5);
    let domain = path5_domain();
    assert!(domain.is_normalized());
    // Inner vertices v1..v3; each end loses one unit edge.
    assert_eq!(domain.total_boundary_weight(), int(2));
    assert_eq!(domain.total_volume(), int(6));
    let ends = domain.vertex_set(&["v1", "v3"]).unwrap();
    assert_eq!(domain.boundary_of(&ends), int(4));
    assert_eq!(domain.boundary_of(&ends), graph.edge_boundary(&graph.vertex_set(&["v1", "v3"]).unwrap()));
}

#[test]
fn domain_boundary_agrees_with_ambient_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..20 {
        let graph_seed: u64 = rng.gen();
        let domain = random_domain(&mut ChaCha8Rng::seed_from_u64(graph_seed), 5, true, false);
        assert!(domain.is_connected());
        for i in 0..domain.len() {
            assert_eq!(domain.ambient_degree(i), domain.interior_degree(i) + domain.boundary_weight(i));
            assert_eq!(domain.ambient_degree(i), *domain.nu(i));
        }
    }
}

#[test]
fn metric_balls_on_the_path() {
    let graph = path5();
    let (ball, sphere) = graph.metric_balls("v2", 1).unwrap();
    assert_eq!(ball.len(), 3);
    assert_eq!(sphere.len(), 2);
    assert!(matches!(graph.metric_balls("nope", 1), Err(Error::UnknownVertex(_))));
}

#[test]
fn bipartition_detection() {
    let path = path5_domain().bipartition().unwrap().unwrap();
    assert_eq!(path.part_one().len() + path.part_two().len(), 3);
    assert!(triangle_domain().bipartition().unwrap().is_none());

    let domain = path5_domain();
    let wrong = Bipartition::new(&domain, &VertexSet::from([0, 1]), &VertexSet::from([2]));
    assert!(wrong.is_err());
}

#[test]
fn invalid_graphs_are_rejected() {
    let v = |id: &str| (id.to_string(), int(1));
    let e = |a: &str, b: &str| (a.to_string(), b.to_string(), int(1));
    assert!(matches!(WeightedGraph::new(vec![v("a")], vec![e("a", "a")]), Err(Error::InvalidEdge { .. })));
    assert!(matches!(WeightedGraph::new(vec![v("a"), v("a")], vec![]), Err(Error::DuplicateVertex(_))));
    let negative = WeightedGraph::new(
        vec![v("a"), v("b")],
        vec![("a".to_string(), "b".to_string(), ratio(-1, 2))],
    );
    assert!(negative.is_err());

    let graph = WeightedGraph::new(vec![v("a"), v("b"), v("c")], vec![e("a", "c")]).unwrap();
    let split = build_domain(&graph, &["a", "b"]).unwrap();
    assert!(!split.is_connected());
    assert!(matches!(split.bipartition(), Err(Error::DisconnectedDomain)));
    assert!(matches!(build_domain(&graph, &[] as &[&str]), Err(Error::EmptyDomain)));
}

#[test]
fn whole_graph_as_domain_has_no_boundary() {
    let graph = pendant_triangle();
    let domain = DirichletDomain::build(&graph, graph.ids()).unwrap();
    assert_eq!(domain.total_boundary_weight(), int(0));
}

#[test]
fn antitree_spheres_grow_polynomially() {
    use plap::linear::{materialize, ModelSpec, Scheme};
    let (graph, sizes) = materialize(&ModelSpec::antitree(1, Scheme::Physical).unwrap(), 3).unwrap();
    assert_eq!(sizes, vec![1, 2, 3, 4]);
    let (ball, sphere) = graph.metric_balls("s0_0", 2).unwrap();
    assert_eq!(sphere.len(), 3);
    assert_eq!(ball.len(), 6);
}
