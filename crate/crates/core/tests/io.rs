use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plap::cheeger::cheeger_exact;
use plap::fixtures::{pendant_triangle, path5_domain, random_domain, star_domain};
use plap::io::{
    cheeger_to_json, domain_to_json, eigenpair_to_json, graph_to_json, parse_cheeger, parse_domain, parse_graph,
    parse_partition, partition_to_json, round9,
};
use plap::rational::{format_rational, parse_rational, ratio};
use plap::spectral::{first_eigenpair, SolverConfig};
use plap::symmetry::{enumerate_automorphisms, orbits};
use plap::Error;

#[test]
fn domains_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let size = rng.gen_range(1..=6);
        let normalized = rng.gen_bool(0.5);
        let domain = random_domain(&mut rng, size, normalized, false);
        let text = domain_to_json(&domain).to_string();
        assert_eq!(parse_domain(&text).unwrap(), domain);
    }
    let domain = star_domain();
    assert_eq!(parse_domain(&domain_to_json(&domain).to_string()).unwrap(), domain);
}

#[test]
fn graphs_round_trip() {
    let graph = pendant_triangle();
    assert_eq!(parse_graph(&graph_to_json(&graph).to_string()).unwrap(), graph);
}

#[test]
fn cheeger_results_and_partitions_round_trip() {
    let domain = path5_domain();
    let result = cheeger_exact(&domain).unwrap();
    let text = cheeger_to_json(&result, &domain).to_string();
    assert_eq!(parse_cheeger(&text, &domain).unwrap(), result);

    let partition = orbits(&enumerate_automorphisms(&domain, 12).unwrap());
    let text = partition_to_json(&partition, &domain).to_string();
    assert_eq!(parse_partition(&text, &domain).unwrap(), partition);
}

#[test]
fn eigenpair_json_is_keyed_by_vertex_and_rounded() {
    let domain = path5_domain();
    let pair = first_eigenpair(&domain, 3.0, &SolverConfig::default()).unwrap();
    let value = eigenpair_to_json(&pair, &domain);
    assert_eq!(value["u"].as_object().unwrap().len(), 3);
    assert_eq!(value["lambda"].as_f64().unwrap(), round9(pair.lambda));
    assert_eq!(value["certified"], serde_json::Value::Bool(true));
}

#[test]
fn rationals_parse_in_all_notations() {
    assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
    assert_eq!(parse_rational(" -0.25 ").unwrap(), ratio(-1, 4));
    assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
    assert_eq!(format_rational(&ratio(10, 4)), "5/2");
    assert_eq!(format_rational(&ratio(4, 2)), "2");
    for bad in ["", "1/0", "x", "1.", "1/2/3"] {
        assert!(parse_rational(bad).is_err(), "{bad}");
    }
}

#[test]
fn malformed_documents_are_rejected() {
    let cases = [
        "not json",
        r#"{"vertices":[{"id":"a","nu":"1"}],"edges":[],"extra":1}"#,
        r#"{"vertices":[{"id":"a","nu":"0"}],"edges":[]}"#,
        r#"{"vertices":[{"id":"a","nu":"1"},{"id":"a","nu":"1"}],"edges":[]}"#,
        r#"{"vertices":[{"id":"a","nu":"1"}],"edges":[{"u":"a","v":"b","mu":"1"}]}"#,
        r#"{"vertices":[{"id":"a","nu":"1"}],"edges":[],"omega":["z"]}"#,
    ];
    for text in cases {
        assert!(parse_domain(text).is_err(), "{text}");
    }
    assert!(matches!(parse_domain("[1"), Err(Error::Parse(_))));
}
