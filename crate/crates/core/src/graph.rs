//! Weighted graphs, Dirichlet domains and their combinatorial measures.
//!
//! A [`WeightedGraph`] carries exact rational vertex measures `nu` and edge
//! weights `mu`. A [`DirichletDomain`] is a vertex subset with every outside
//! vertex collapsed into one absorbing vertex: each interior vertex keeps the
//! aggregated weight of its edges leaving the subset. Functions on a domain
//! are extended by zero through that vertex.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Vertex subsets are stored as sorted dense indices.
pub type VertexSet = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    nu: Vec<Rational>,
    adjacency: Vec<Vec<(usize, Rational)>>,
}

impl WeightedGraph {
    /// Builds a simple undirected graph. Vertex order is the order given.
    pub fn new(
        vertices: Vec<(String, Rational)>,
        edges: Vec<(String, String, Rational)>,
    ) -> Result<Self> {
        let mut ids = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        let mut nu = Vec::with_capacity(vertices.len());
        for (id, measure) in vertices {
            if !measure.is_positive() {
                return Err(Error::InvalidWeight(id, "vertex measure must be positive".into()));
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
            ids.push(id);
            nu.push(measure);
        }
        let adjacency = build_adjacency(&index, ids.len(), edges)?;
        Ok(Self {
            ids,
            index,
            nu,
            adjacency,
        })
    }

    /// Builds a graph whose vertex measure is the weighted degree.
    pub fn with_degree_measure(
        ids: Vec<String>,
        edges: Vec<(String, String, Rational)>,
    ) -> Result<Self> {
        let placeholder = ids.iter().map(|id| (id.clone(), crate::rational::int(1))).collect();
        let mut graph = Self::new(placeholder, edges)?;
        for i in 0..graph.len() {
            let deg = graph.degree(i);
            if deg.is_zero() {
                return Err(Error::InvalidWeight(
                    graph.ids[i].clone(),
                    "isolated vertex has zero degree measure".into(),
                ));
            }
            graph.nu[i] = deg;
        }
        Ok(graph)
    }

    /// Unit edge weights with the degree measure.
    pub fn unit_normalized(ids: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        Self::with_degree_measure(
            ids.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(u, v)| (u.to_string(), v.to_string(), crate::rational::int(1)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn nu(&self, i: usize) -> &Rational {
        &self.nu[i]
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, Rational)] {
        &self.adjacency[i]
    }

    pub fn edge_weight(&self, i: usize, j: usize) -> Option<&Rational> {
        self.adjacency[i]
            .binary_search_by_key(&j, |(k, _)| *k)
            .ok()
            .map(|pos| &self.adjacency[i][pos].1)
    }

    /// Each undirected edge once, as `(i, j, mu)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            nbrs.iter()
                .filter(move |(j, _)| i < *j)
                .map(move |(j, w)| (i, *j, w))
        })
    }

    pub fn degree(&self, i: usize) -> Rational {
        self.adjacency[i].iter().map(|(_, w)| w).sum()
    }

    pub fn vertex_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<VertexSet> {
        ids.iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Total weight of edges with exactly one endpoint in `u`.
    pub fn edge_boundary(&self, u: &VertexSet) -> Rational {
        u.iter()
            .flat_map(|&x| self.adjacency[x].iter())
            .filter(|(y, _)| !u.contains(y))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn volume(&self, u: &VertexSet) -> Rational {
        u.iter().map(|&x| &self.nu[x]).sum()
    }

    /// Combinatorial distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for &(y, _) in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Ball `B_r(center)` and sphere `S_r(center)`.
    pub fn metric_balls(&self, center: &str, r: usize) -> Result<(VertexSet, VertexSet)> {
        let c = self
            .index_of(center)
            .ok_or_else(|| Error::UnknownVertex(center.to_string()))?;
        let dist = self.distances_from(c);
        let mut ball = VertexSet::new();
        let mut sphere = VertexSet::new();
        for (x, d) in dist.iter().enumerate() {
            match d {
                Some(d) if *d < r => {
                    ball.insert(x);
                }
                Some(d) if *d == r => {
                    ball.insert(x);
                    sphere.insert(x);
                }
                _ => {}
            }
        }
        Ok((ball, sphere))
    }
}

fn build_adjacency(
    index: &HashMap<String, usize>,
    n: usize,
    edges: Vec<(String, String, Rational)>,
) -> Result<Vec<Vec<(usize, Rational)>>> {
    let mut adjacency: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (u, v, w) in edges {
        let invalid = |reason: &str| Error::InvalidEdge {
            u: u.clone(),
            v: v.clone(),
            reason: reason.to_string(),
        };
        let i = *index.get(&u).ok_or_else(|| Error::UnknownVertex(u.clone()))?;
        let j = *index.get(&v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
        if i == j {
            return Err(invalid("self-loops are not allowed"));
        }
        if !w.is_positive() {
            return Err(invalid("edge weight must be positive"));
        }
        if adjacency[i].iter().any(|(k, _)| *k == j) {
            return Err(invalid("parallel edge"));
        }
        adjacency[i].push((j, w.clone()));
        adjacency[j].push((i, w));
    }
    for nbrs in &mut adjacency {
        nbrs.sort_by_key(|(k, _)| *k);
    }
    Ok(adjacency)
}

/// Floating-point mirror of a domain, used by the spectral solvers.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct NumericDomain {
    pub nu: Vec<f64>,
    pub boundary: Vec<f64>,
    pub edges: Vec<(usize, usize, f64)>,
}

/// A finite vertex subset whose complement is collapsed to one absorbing vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletDomain {
    ids: Vec<String>,
    nu: Vec<Rational>,
    adjacency: Vec<Vec<(usize, Rational)>>,
    boundary: Vec<Rational>,
    numeric: NumericDomain,
}

impl DirichletDomain {
    /// Builds a domain directly from interior data. `edges` use interior indices.
    pub fn new(
        ids: Vec<String>,
        nu: Vec<Rational>,
        edges: Vec<(usize, usize, Rational)>,
        boundary: Vec<Rational>,
    ) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        for (name, len) in [("nu", nu.len()), ("boundary", boundary.len())] {
            if len != n {
                return Err(Error::InvalidSpec(format!(
                    "{name} has {len} entries for {n} vertices"
                )));
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
            if !nu[i].is_positive() {
                return Err(Error::InvalidWeight(id.clone(), "vertex measure must be positive".into()));
            }
            if boundary[i].is_negative() {
                return Err(Error::InvalidWeight(id.clone(), "boundary weight must be nonnegative".into()));
            }
        }
        for (i, j, _) in &edges {
            if *i >= n || *j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: (*i).max(*j) + 1,
                });
            }
        }
        let named = edges
            .into_iter()
            .map(|(i, j, w)| (ids[i].clone(), ids[j].clone(), w))
            .collect();
        let adjacency = build_adjacency(&index, n, named)?;
        let numeric = NumericDomain {
            nu: nu.iter().map(to_f64).collect(),
            boundary: boundary.iter().map(to_f64).collect(),
            edges: adjacency
                .iter()
                .enumerate()
                .flat_map(|(i, nbrs)| {
                    nbrs.iter()
                        .filter(move |(j, _)| i < *j)
                        .map(move |(j, w)| (i, *j, to_f64(w)))
                })
                .collect(),
        };
        Ok(Self {
            ids,
            nu,
            adjacency,
            boundary,
            numeric,
        })
    }

    /// Restricts `graph` to `omega`, aggregating the crossing weights into the
    /// boundary weight of each interior vertex. Interior order follows the graph.
    pub fn build<S: AsRef<str>>(graph: &WeightedGraph, omega: &[S]) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let members = graph.vertex_set(omega)?;
        Self::from_vertex_set(graph, &members)
    }

    pub fn from_vertex_set(graph: &WeightedGraph, members: &VertexSet) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let order: Vec<usize> = members.iter().copied().collect();
        let local: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let mut edges = Vec::new();
        let mut boundary = vec![Rational::zero(); order.len()];
        for (k, &x) in order.iter().enumerate() {
            for (y, w) in graph.neighbors(x) {
                match local.get(y) {
                    Some(&l) if k < l => edges.push((k, l, w.clone())),
                    Some(_) => {}
                    None => boundary[k] += w,
                }
            }
        }
        Self::new(
            order.iter().map(|&x| graph.id(x).to_string()).collect(),
            order.iter().map(|&x| graph.nu(x).clone()).collect(),
            edges,
            boundary,
        )
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn nu(&self, i: usize) -> &Rational {
        &self.nu[i]
    }

    pub fn boundary_weight(&self, i: usize) -> &Rational {
        &self.boundary[i]
    }

    pub fn boundary_weights(&self) -> &[Rational] {
        &self.boundary
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, Rational)] {
        &self.adjacency[i]
    }

    pub fn edge_weight(&self, i: usize, j: usize) -> Option<&Rational> {
        self.adjacency[i]
            .binary_search_by_key(&j, |(k, _)| *k)
            .ok()
            .map(|pos| &self.adjacency[i][pos].1)
    }

    /// Interior edges once each, `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            nbrs.iter()
                .filter(move |(j, _)| i < *j)
                .map(move |(j, w)| (i, *j, w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.numeric.edges.len()
    }

    /// Interior weighted degree (edges to the absorbing vertex excluded).
    pub fn interior_degree(&self, i: usize) -> Rational {
        self.adjacency[i].iter().map(|(_, w)| w).sum()
    }

    /// Degree in the ambient graph: interior degree plus boundary weight.
    pub fn ambient_degree(&self, i: usize) -> Rational {
        self.interior_degree(i) + &self.boundary[i]
    }

    /// Checks `nu_x = sum_y mu_xy` over the ambient graph for every interior vertex.
    pub fn check_normalized(&self) -> Result<()> {
        for i in 0..self.len() {
            let deg = self.ambient_degree(i);
            if deg != self.nu[i] {
                return Err(Error::NotNormalized(format!(
                    "vertex `{}` has nu = {} but degree {}",
                    self.ids[i], self.nu[i], deg
                )));
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        self.check_normalized().is_ok()
    }

    pub fn vertex_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<VertexSet> {
        ids.iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(s.as_ref().to_string()))
            })
            .collect()
    }

    /// `|dU|` in the collapsed domain: interior edges leaving `u` plus the
    /// boundary weight of every vertex of `u`.
    pub fn boundary_of(&self, u: &VertexSet) -> Rational {
        let mut total = Rational::zero();
        for &x in u {
            total += &self.boundary[x];
            for (y, w) in &self.adjacency[x] {
                if !u.contains(y) {
                    total += w;
                }
            }
        }
        total
    }

    pub fn volume(&self, u: &VertexSet) -> Rational {
        u.iter().map(|&x| &self.nu[x]).sum()
    }

    pub fn total_volume(&self) -> Rational {
        self.nu.iter().sum()
    }

    pub fn total_boundary_weight(&self) -> Rational {
        self.boundary.iter().sum()
    }

    /// Reachability over interior edges only.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.len()
    }

    /// Two-colouring by breadth-first search; `None` when an interior odd cycle exists.
    pub fn bipartition(&self) -> Result<Option<Bipartition>> {
        if !self.is_connected() {
            return Err(Error::DisconnectedDomain);
        }
        let mut side: Vec<Option<bool>> = vec![None; self.len()];
        side[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x].unwrap_or(false);
            for &(y, _) in &self.adjacency[x] {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        queue.push_back(y);
                    }
                    Some(sy) if sy == sx => return Ok(None),
                    Some(_) => {}
                }
            }
        }
        Ok(Some(Bipartition {
            in_part_two: side.into_iter().map(|s| s.unwrap_or(false)).collect(),
        }))
    }

    pub(crate) fn numeric(&self) -> &NumericDomain {
        &self.numeric
    }

    pub(crate) fn check_dimension(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }
}

pub fn build_domain<S: AsRef<str>>(graph: &WeightedGraph, omega: &[S]) -> Result<DirichletDomain> {
    DirichletDomain::build(graph, omega)
}

pub fn edge_boundary(graph: &WeightedGraph, u: &VertexSet) -> Rational {
    graph.edge_boundary(u)
}

pub fn volume(graph: &WeightedGraph, u: &VertexSet) -> Rational {
    graph.volume(u)
}

pub fn is_connected(domain: &DirichletDomain) -> bool {
    domain.is_connected()
}

pub fn bipartition(domain: &DirichletDomain) -> Result<Option<Bipartition>> {
    domain.bipartition()
}

pub fn metric_balls(graph: &WeightedGraph, center: &str, r: usize) -> Result<(VertexSet, VertexSet)> {
    graph.metric_balls(center, r)
}

/// Two disjoint parts covering a domain with every interior edge crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    in_part_two: Vec<bool>,
}

impl Bipartition {
    pub fn new(domain: &DirichletDomain, part_one: &VertexSet, part_two: &VertexSet) -> Result<Self> {
        let n = domain.len();
        if part_one.intersection(part_two).next().is_some() {
            return Err(Error::InvalidBipartition("parts overlap".into()));
        }
        if part_one.len() + part_two.len() != n || part_one.iter().chain(part_two).any(|&x| x >= n) {
            return Err(Error::InvalidBipartition("parts do not cover the domain".into()));
        }
        let parts = Self {
            in_part_two: (0..n).map(|x| part_two.contains(&x)).collect(),
        };
        parts.validate(domain)?;
        Ok(parts)
    }

    pub fn validate(&self, domain: &DirichletDomain) -> Result<()> {
        domain.check_dimension(self.in_part_two.len())?;
        if let Some((i, j, _)) = domain
            .edges()
            .find(|(i, j, _)| self.in_part_two[*i] == self.in_part_two[*j])
        {
            return Err(Error::InvalidBipartition(format!(
                "edge {}-{} lies inside one part",
                domain.id(i),
                domain.id(j)
            )));
        }
        Ok(())
    }

    pub fn part_one(&self) -> VertexSet {
        (0..self.in_part_two.len()).filter(|&x| !self.in_part_two[x]).collect()
    }

    pub fn part_two(&self) -> VertexSet {
        (0..self.in_part_two.len()).filter(|&x| self.in_part_two[x]).collect()
    }

    pub fn in_part_two(&self, x: usize) -> bool {
        self.in_part_two[x]
    }

    pub fn len(&self) -> usize {
        self.in_part_two.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_part_two.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn path_domain_aggregates_crossing_weights() {
        let g = fixtures::path5();
        let d = DirichletDomain::build(&g, &["v1", "v2", "v3"]).unwrap();
        assert_eq!(d.boundary_weights(), &[int(1), int(0), int(1)]);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.nu(1), &int(2));
    }

    #[test]
    fn whole_connected_graph_has_no_boundary() {
        let g = fixtures::pendant_triangle();
        let all: Vec<&str> = g.ids().iter().map(String::as_str).collect();
        let d = DirichletDomain::build(&g, &all).unwrap();
        assert!(d.boundary_weights().iter().all(Zero::is_zero));
    }

    #[test]
    fn pendant_triangle_pair_domain() {
        let g = fixtures::pendant_triangle();
        let d = DirichletDomain::build(&g, &["v2", "v1"]).unwrap();
        assert_eq!(d.ids(), &["v1", "v2"]);
        assert_eq!(d.boundary_weights(), &[int(0), int(1)]);
    }

    #[test]
    fn build_errors() {
        let g = fixtures::path5();
        let empty: [&str; 0] = [];
        assert_eq!(DirichletDomain::build(&g, &empty), Err(Error::EmptyDomain));
        assert_eq!(
            DirichletDomain::build(&g, &["v1", "zz"]),
            Err(Error::UnknownVertex("zz".into()))
        );
    }

    #[test]
    fn edge_boundary_and_volume() {
        let g = fixtures::pendant_triangle();
        assert_eq!(g.edge_boundary(&VertexSet::new()), int(0));
        let k1 = g.vertex_set(&["v1", "v2", "v3"]).unwrap();
        assert_eq!(g.edge_boundary(&k1), int(2));
        assert_eq!(g.volume(&k1), int(6));
        assert_eq!(g.volume(&VertexSet::new()), int(0));
        assert_eq!(g.volume(&set(&[3])), g.nu(3).clone());

        let single = WeightedGraph::new(
            vec![("a".into(), int(1)), ("b".into(), int(1))],
            vec![("a".into(), "b".into(), int(3))],
        )
        .unwrap();
        assert_eq!(single.edge_boundary(&set(&[0])), int(3));
    }

    #[test]
    fn connectivity() {
        let g = fixtures::path5();
        assert!(DirichletDomain::build(&g, &["v1", "v2", "v3"]).unwrap().is_connected());
        assert!(!DirichletDomain::build(&g, &["v1", "v3"]).unwrap().is_connected());
        let f = fixtures::pendant_triangle();
        assert!(!DirichletDomain::build(&f, &["v1", "v4"]).unwrap().is_connected());
    }

    #[test]
    fn bipartitions() {
        let g = fixtures::path5();
        let d = DirichletDomain::build(&g, &["v1", "v2", "v3"]).unwrap();
        let parts = d.bipartition().unwrap().unwrap();
        assert_eq!(parts.part_one(), set(&[0, 2]));
        assert_eq!(parts.part_two(), set(&[1]));

        let t = fixtures::pendant_triangle();
        let tri = DirichletDomain::build(&t, &["v3", "v4", "v5"]).unwrap();
        assert_eq!(tri.bipartition().unwrap(), None);

        let one = DirichletDomain::build(&g, &["v2"]).unwrap();
        let parts = one.bipartition().unwrap().unwrap();
        assert_eq!(parts.part_one(), set(&[0]));
        assert!(parts.part_two().is_empty());

        let split = DirichletDomain::build(&g, &["v1", "v3"]).unwrap();
        assert_eq!(split.bipartition(), Err(Error::DisconnectedDomain));
    }

    #[test]
    fn explicit_bipartition_is_validated() {
        let g = fixtures::path5();
        let d = DirichletDomain::build(&g, &["v1", "v2", "v3"]).unwrap();
        assert!(Bipartition::new(&d, &set(&[0, 1]), &set(&[2])).is_err());
        assert!(Bipartition::new(&d, &set(&[0]), &set(&[1])).is_err());
        assert!(Bipartition::new(&d, &set(&[0, 2]), &set(&[1])).is_ok());
    }

    #[test]
    fn balls_and_spheres() {
        let g = fixtures::path5();
        let (b, s) = g.metric_balls("v2", 0).unwrap();
        assert_eq!((b, s), (set(&[2]), set(&[2])));
        let (b, s) = g.metric_balls("v2", 1).unwrap();
        assert_eq!(b, set(&[1, 2, 3]));
        assert_eq!(s, set(&[1, 3]));
        assert_eq!(g.metric_balls("nope", 1), Err(Error::UnknownVertex("nope".into())));
    }

    #[test]
    fn rejects_malformed_graphs() {
        let v = |id: &str| (id.to_string(), int(1));
        let e = |a: &str, b: &str, w| (a.to_string(), b.to_string(), w);
        assert!(matches!(
            WeightedGraph::new(vec![v("a"), v("a")], vec![]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            WeightedGraph::new(vec![v("a")], vec![e("a", "a", int(1))]),
            Err(Error::InvalidEdge { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(vec![v("a"), v("b")], vec![e("a", "b", int(0))]),
            Err(Error::InvalidEdge { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(vec![v("a"), v("b")], vec![e("a", "b", int(1)), e("b", "a", int(2))]),
            Err(Error::InvalidEdge { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(vec![("a".into(), ratio(-1, 2))], vec![]),
            Err(Error::InvalidWeight(..))
        ));
    }

    #[test]
    fn normalization_check() {
        let g = fixtures::path5();
        let d = DirichletDomain::build(&g, &["v1", "v2", "v3"]).unwrap();
        assert!(d.is_normalized());
        let skewed = DirichletDomain::new(
            vec!["x".into()],
            vec![int(3)],
            vec![],
            vec![int(2)],
        )
        .unwrap();
        assert!(matches!(skewed.check_normalized(), Err(Error::NotNormalized(_))));
    }
}
