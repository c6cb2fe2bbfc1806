//! JSON forms of graphs, domains, partitions and results.
//!
//! Rationals are written as `"p/q"` strings (integers without the slash) and
//! read from strings or JSON integers. Floats are rounded to nine significant
//! digits on output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cheeger::CheegerResult;
use crate::error::{Error, Result};
use crate::graph::{DirichletDomain, VertexSet, WeightedGraph};
use crate::rational::{format_rational, Rational};
use crate::spectral::EigenPair;
use crate::symmetry::VertexPartition;

/// Id of the explicit vertex standing for everything outside a written domain.
pub const BOUNDARY_ID: &str = "#boundary";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: String,
    #[serde(with = "crate::rational::serde_rational")]
    nu: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    u: String,
    v: String,
    #[serde(with = "crate::rational::serde_rational")]
    mu: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionJson {
    cells: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CheegerJson {
    #[serde(with = "crate::rational::serde_rational")]
    h: Rational,
    cuts: Vec<Vec<String>>,
    subsets_examined: u64,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn graph_from(raw: GraphJson) -> Result<(WeightedGraph, Option<Vec<String>>)> {
    let graph = WeightedGraph::new(
        raw.vertices.into_iter().map(|v| (v.id, v.nu)).collect(),
        raw.edges.into_iter().map(|e| (e.u, e.v, e.mu)).collect(),
    )?;
    Ok((graph, raw.omega))
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    Ok(graph_from(parse_json(text)?)?.0)
}

/// A graph together with its `omega`; without `omega` every vertex is interior.
pub fn parse_domain(text: &str) -> Result<DirichletDomain> {
    let (graph, omega) = graph_from(parse_json(text)?)?;
    match omega {
        Some(omega) => DirichletDomain::build(&graph, &omega),
        None => DirichletDomain::build(&graph, graph.ids()),
    }
}

fn graph_json(graph: &WeightedGraph) -> GraphJson {
    GraphJson {
        vertices: (0..graph.len())
            .map(|i| VertexJson {
                id: graph.id(i).to_string(),
                nu: graph.nu(i).clone(),
            })
            .collect(),
        edges: graph
            .edges()
            .map(|(i, j, w)| EdgeJson {
                u: graph.id(i).to_string(),
                v: graph.id(j).to_string(),
                mu: w.clone(),
            })
            .collect(),
        omega: None,
    }
}

pub fn graph_to_json(graph: &WeightedGraph) -> Value {
    serde_json::to_value(graph_json(graph)).expect("graph JSON is serializable")
}

/// Writes a domain as a graph with one explicit [`BOUNDARY_ID`] vertex
/// carrying the boundary weights, plus `omega`; reading it back rebuilds
/// the same domain.
pub fn domain_to_json(domain: &DirichletDomain) -> Value {
    let mut vertices: Vec<VertexJson> = (0..domain.len())
        .map(|i| VertexJson {
            id: domain.id(i).to_string(),
            nu: domain.nu(i).clone(),
        })
        .collect();
    let mut edges: Vec<EdgeJson> = domain
        .edges()
        .map(|(i, j, w)| EdgeJson {
            u: domain.id(i).to_string(),
            v: domain.id(j).to_string(),
            mu: w.clone(),
        })
        .collect();
    let boundary: Vec<EdgeJson> = (0..domain.len())
        .filter(|&i| *domain.boundary_weight(i) != Rational::from_integer(0.into()))
        .map(|i| EdgeJson {
            u: domain.id(i).to_string(),
            v: BOUNDARY_ID.to_string(),
            mu: domain.boundary_weight(i).clone(),
        })
        .collect();
    if !boundary.is_empty() {
        vertices.push(VertexJson {
            id: BOUNDARY_ID.to_string(),
            nu: Rational::from_integer(1.into()),
        });
        edges.extend(boundary);
    }
    let raw = GraphJson {
        vertices,
        edges,
        omega: Some(domain.ids().to_vec()),
    };
    serde_json::to_value(raw).expect("domain JSON is serializable")
}

pub fn parse_partition(text: &str, domain: &DirichletDomain) -> Result<VertexPartition> {
    let raw: PartitionJson = parse_json(text)?;
    VertexPartition::from_ids(domain, &raw.cells)
}

pub fn partition_to_json(partition: &VertexPartition, domain: &DirichletDomain) -> Value {
    json!({ "cells": partition.cell_ids(domain) })
}

fn set_ids(domain: &DirichletDomain, set: &VertexSet) -> Vec<String> {
    set.iter().map(|&x| domain.id(x).to_string()).collect()
}

pub fn cheeger_to_json(result: &CheegerResult, domain: &DirichletDomain) -> Value {
    json!({
        "h": format_rational(&result.h),
        "cuts": result.cuts.iter().map(|c| set_ids(domain, c)).collect::<Vec<_>>(),
        "subsetsExamined": result.subsets_examined,
    })
}

pub fn parse_cheeger(text: &str, domain: &DirichletDomain) -> Result<CheegerResult> {
    let raw: CheegerJson = parse_json(text)?;
    Ok(CheegerResult {
        h: raw.h,
        cuts: raw.cuts.iter().map(|c| domain.vertex_set(c)).collect::<Result<_>>()?,
        subsets_examined: raw.subsets_examined,
    })
}

/// `x` rounded to nine significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(round9(x)).map_or(Value::Null, Value::Number)
}

pub fn eigenpair_to_json(pair: &EigenPair, domain: &DirichletDomain) -> Value {
    let mut u = Map::new();
    for (i, value) in pair.u.iter().enumerate() {
        u.insert(domain.id(i).to_string(), number(*value));
    }
    json!({
        "p": number(pair.p),
        "lambda": number(pair.lambda),
        "u": u,
        "residual": number(pair.residual),
        "certified": pair.certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;

    #[test]
    fn graph_round_trip() {
        let g = fixtures::pendant_triangle();
        let text = graph_to_json(&g).to_string();
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn domain_round_trip_through_boundary_vertex() {
        let d = fixtures::path5_domain();
        let text = domain_to_json(&d).to_string();
        assert!(text.contains(BOUNDARY_ID));
        assert_eq!(parse_domain(&text).unwrap(), d);
        let d = fixtures::pendant_triangle_domain();
        let text = domain_to_json(&d).to_string();
        assert!(!text.contains(BOUNDARY_ID));
        assert_eq!(parse_domain(&text).unwrap(), d);
    }

    #[test]
    fn rationals_accept_integers_and_strings() {
        let text = r#"{"vertices":[{"id":"a","nu":"3/2"},{"id":"b","nu":2}],
                       "edges":[{"u":"a","v":"b","mu":"1/3"}],"omega":["a"]}"#;
        let d = parse_domain(text).unwrap();
        assert_eq!(d.nu(0), &crate::rational::ratio(3, 2));
        assert_eq!(d.boundary_weight(0), &crate::rational::ratio(1, 3));
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        assert!(matches!(parse_graph("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_graph(r#"{"vertices":[{"id":"a","nu":"1/0"}],"edges":[]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_graph(r#"{"vertices":[{"id":"a","nu":1}],"edges":[{"u":"a","v":"z","mu":1}]}"#),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn partition_and_cheeger_round_trip() {
        let d = fixtures::path5_domain();
        let part = VertexPartition::from_ids(&d, &[vec!["v1", "v3"], vec!["v2"]]).unwrap();
        let text = partition_to_json(&part, &d).to_string();
        assert_eq!(parse_partition(&text, &d).unwrap(), part);
        let result = crate::cheeger::cheeger_exact(&d).unwrap();
        let text = cheeger_to_json(&result, &d).to_string();
        assert_eq!(parse_cheeger(&text, &d).unwrap(), result);
    }

    #[test]
    fn floats_are_rounded() {
        assert_eq!(round9(0.1234567891234), 0.123456789);
        assert_eq!(round9(-2.0), -2.0);
        let d = fixtures::singleton(int(2), int(5));
        let pair = crate::spectral::first_eigenpair(&d, 2.0, &Default::default()).unwrap();
        let v = eigenpair_to_json(&pair, &d);
        assert_eq!(v["lambda"], json!(2.5));
        assert!(v["u"]["x"].is_number());
    }
}
