//! Spherically symmetric trees and anti-trees, their linear reductions under
//! the physical, modified physical and normalized weightings, and the
//! reference values they are checked against.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::limit::{estimate_limit, LimitEstimate, LimitStatus};
use super::surd::{Surd, SurdSum};
use super::{cheeger_at_infinity, cheeger_linear, LinearCheeger, LinearGraph};
use crate::error::{Error, Result};
use crate::graph::{DirichletDomain, VertexSet, WeightedGraph};
use crate::rational::{int, Rational};
use crate::symmetry::{quotient, VertexPartition};

/// Largest explicit graph [`materialize`] builds.
pub const MAX_MATERIALIZED: usize = 2000;

/// Branching numbers `m_0, m_1, ...` of a spherically symmetric tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Branching {
    Constant(u64),
    /// `m_i = first + step * i`.
    Arithmetic { first: u64, step: u64 },
    /// Explicit prefix; the last entry repeats forever.
    List(Vec<u64>),
}

impl Branching {
    pub fn at(&self, i: usize) -> u64 {
        match self {
            Branching::Constant(m) => *m,
            Branching::Arithmetic { first, step } => first + step * i as u64,
            Branching::List(ms) => ms[i.min(ms.len() - 1)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Branching::Constant(m) => *m >= 1,
            Branching::Arithmetic { first, .. } => *first >= 1,
            Branching::List(ms) => !ms.is_empty() && ms.iter().all(|&m| m >= 1),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec("branching numbers must be at least 1".into()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Family {
    Tree(Branching),
    AntiTree { order: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Physical,
    Modified,
    Normalized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelSpec {
    pub family: Family,
    pub scheme: Scheme,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: String,
    branching: Option<Vec<u64>>,
    order: Option<u32>,
    scheme: Scheme,
    horizon: Option<usize>,
}

impl ModelSpec {
    pub fn new(family: Family, scheme: Scheme) -> Result<Self> {
        match &family {
            Family::Tree(b) => b.validate()?,
            Family::AntiTree { order } if *order == 0 => {
                return Err(Error::InvalidSpec("anti-tree order must be at least 1".into()))
            }
            Family::AntiTree { .. } => {}
        }
        Ok(Self { family, scheme })
    }

    pub fn tree(branching: Branching, scheme: Scheme) -> Result<Self> {
        Self::new(Family::Tree(branching), scheme)
    }

    pub fn antitree(order: u32, scheme: Scheme) -> Result<Self> {
        Self::new(Family::AntiTree { order }, scheme)
    }

    /// Parses `{"family": "tree"|"antitree", "branching": [..] | "order": a,
    /// "scheme": .., "horizon": ..}`; returns the optional horizon alongside.
    pub fn from_json(text: &str) -> Result<(Self, Option<usize>)> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let family = match (raw.family.as_str(), raw.branching, raw.order) {
            ("tree", Some(ms), None) => Family::Tree(Branching::List(ms)),
            ("antitree", None, Some(order)) => Family::AntiTree { order },
            ("tree", ..) => return Err(Error::InvalidSpec("a tree needs `branching` only".into())),
            ("antitree", ..) => return Err(Error::InvalidSpec("an anti-tree needs `order` only".into())),
            (other, ..) => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        };
        Ok((Self::new(family, raw.scheme)?, raw.horizon))
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self {
            family: self.family.clone(),
            scheme,
        }
    }
}

/// Sphere sizes `n_r` and edge counts `e_r` between spheres `r` and `r + 1`.
fn sphere_data(family: &Family, upto: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut sizes = Vec::with_capacity(upto + 2);
    let mut edges = Vec::with_capacity(upto + 1);
    match family {
        Family::Tree(b) => {
            sizes.push(BigInt::one());
            for r in 0..=upto {
                let next = &sizes[r] * BigInt::from(b.at(r));
                edges.push(next.clone());
                sizes.push(next);
            }
        }
        Family::AntiTree { order } => {
            let size = |r: usize| Pow::pow(BigInt::from(r + 1), *order);
            for r in 0..=upto {
                sizes.push(size(r));
                edges.push(size(r) * size(r + 1));
            }
            sizes.push(size(upto + 1));
        }
    }
    sizes.truncate(upto + 1);
    (sizes, edges)
}

/// The linear graph of a model on `0..=horizon`.
pub fn build_linear(spec: &ModelSpec, horizon: usize) -> Result<LinearGraph> {
    if horizon < 1 {
        return Err(Error::InvalidSpec("horizon must be at least 1".into()));
    }
    // Modified weights at `horizon` need the degree of sphere `horizon + 1`.
    let (sizes, edges) = sphere_data(&spec.family, horizon + 1);
    let rational = |x: &BigInt| Rational::from_integer(x.clone());
    let below = |r: usize| if r == 0 { BigInt::zero() } else { edges[r - 1].clone() };
    let (nu, mu) = match spec.scheme {
        Scheme::Physical => (
            sizes[..=horizon].iter().map(rational).collect(),
            edges[..=horizon].iter().map(|e| Surd::rational(rational(e))).collect(),
        ),
        Scheme::Normalized => (
            (0..=horizon).map(|r| rational(&(below(r) + &edges[r]))).collect(),
            edges[..=horizon].iter().map(|e| Surd::rational(rational(e))).collect(),
        ),
        Scheme::Modified => {
            // Deg(r) = deg / nu = (e_{r-1} + e_r) / n_r.
            let deg = |r: usize| Rational::new(below(r) + &edges[r], sizes[r].clone());
            let mu = (0..=horizon)
                .map(|r| Surd::over_sqrt(rational(&edges[r]), &deg(r).max(deg(r + 1))))
                .collect::<Result<Vec<_>>>()?;
            (sizes[..=horizon].iter().map(rational).collect(), mu)
        }
    };
    LinearGraph::new(nu, mu)
}

/// Explicit graph on the spheres `0..=radius`, vertices `s{r}_{k}` ordered by
/// sphere. Physical and normalized schemes only. Also returns sphere sizes.
pub fn materialize(spec: &ModelSpec, radius: usize) -> Result<(WeightedGraph, Vec<usize>)> {
    let (sizes, _) = sphere_data(&spec.family, radius);
    let total = sizes.iter().fold(BigInt::zero(), |a, b| a + b);
    let total = usize::try_from(&total).unwrap_or(usize::MAX);
    if total > MAX_MATERIALIZED {
        return Err(Error::TooLarge {
            size: total,
            cap: MAX_MATERIALIZED,
        });
    }
    let sizes: Vec<usize> = sizes.iter().map(|n| usize::try_from(n).expect("bounded")).collect();
    let name = |r: usize, k: usize| format!("s{r}_{k}");
    let ids: Vec<String> = (0..=radius).flat_map(|r| (0..sizes[r]).map(move |k| name(r, k))).collect();
    let mut edges = Vec::new();
    for r in 0..radius {
        match &spec.family {
            Family::Tree(b) => {
                let m = b.at(r) as usize;
                for k in 0..sizes[r] {
                    for c in 0..m {
                        edges.push((name(r, k), name(r + 1, k * m + c), int(1)));
                    }
                }
            }
            Family::AntiTree { .. } => {
                for k in 0..sizes[r] {
                    for l in 0..sizes[r + 1] {
                        edges.push((name(r, k), name(r + 1, l), int(1)));
                    }
                }
            }
        }
    }
    let graph = match spec.scheme {
        Scheme::Physical => WeightedGraph::new(ids.into_iter().map(|id| (id, int(1))).collect(), edges)?,
        Scheme::Normalized => WeightedGraph::with_degree_measure(ids, edges)?,
        Scheme::Modified => {
            return Err(Error::InvalidSpec(
                "modified weights are irrational and cannot be materialized".into(),
            ))
        }
    };
    Ok((graph, sizes))
}

/// The ball `B_R` of the graph materialized to `R + 1`, with its sphere partition.
pub fn truncated_sphere_domain(spec: &ModelSpec, radius: usize) -> Result<(DirichletDomain, VertexPartition)> {
    let (graph, sizes) = materialize(spec, radius + 1)?;
    let inner: usize = sizes[..=radius].iter().sum();
    let domain = DirichletDomain::from_vertex_set(&graph, &(0..inner).collect())?;
    let mut cells = Vec::with_capacity(radius + 1);
    let mut start = 0;
    for &n in &sizes[..=radius] {
        cells.push((start..start + n).collect::<VertexSet>());
        start += n;
    }
    let partition = VertexPartition::new(inner, cells)?;
    Ok((domain, partition))
}

/// Adjacent transpositions inside each sphere of an anti-tree ball `B_R`,
/// as permutations of the ball's indices. They generate the full symmetric
/// group on every sphere.
pub fn sphere_transpositions(order: u32, radius: usize) -> Result<Vec<Vec<usize>>> {
    let (sizes, _) = sphere_data(&Family::AntiTree { order }, radius);
    let sizes: Vec<usize> = sizes
        .iter()
        .map(|n| usize::try_from(n).map_err(|_| Error::TooLarge { size: usize::MAX, cap: MAX_MATERIALIZED }))
        .collect::<Result<_>>()?;
    let total: usize = sizes.iter().sum();
    let mut generators = Vec::new();
    let mut start = 0;
    for n in sizes {
        for k in start..start + n.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..total).collect();
            perm.swap(k, k + 1);
            generators.push(perm);
        }
        start += n;
    }
    Ok(generators)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SphereConsistency {
    pub radius: usize,
    #[serde(serialize_with = "crate::rational::serde_rational_seq::serialize")]
    pub quotient_nu: Vec<Rational>,
    /// Edge weights between consecutive cells, then the boundary weight of the last.
    #[serde(serialize_with = "crate::rational::serde_rational_seq::serialize")]
    pub quotient_mu: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::serde_rational_seq::serialize")]
    pub linear_nu: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::serde_rational_seq::serialize")]
    pub linear_mu: Vec<Rational>,
    pub matches: bool,
}

/// Quotient of the explicit ball `B_R` by its spheres against the linear
/// graph truncated to `R`.
pub fn sphere_partition_consistency(spec: &ModelSpec, radius: usize) -> Result<SphereConsistency> {
    let (domain, partition) = truncated_sphere_domain(spec, radius)?;
    let q = quotient(&domain, &partition)?;
    let quotient_nu: Vec<Rational> = (0..q.len()).map(|i| q.nu(i).clone()).collect();
    let mut quotient_mu: Vec<Rational> = (0..radius)
        .map(|r| q.edge_weight(r, r + 1).cloned().unwrap_or_else(Rational::zero))
        .collect();
    quotient_mu.push(q.boundary_weight(radius).clone());

    let linear = build_linear(spec, radius.max(1))?;
    let linear_nu = linear.nu_seq()[..=radius].to_vec();
    let linear_mu = linear.mu_seq()[..=radius]
        .iter()
        .map(|m| m.as_rational().cloned().expect("physical and normalized weights are rational"))
        .collect::<Vec<_>>();
    let matches = quotient_nu == linear_nu && quotient_mu == linear_mu;
    Ok(SphereConsistency {
        radius,
        quotient_nu,
        quotient_mu,
        linear_nu,
        linear_mu,
        matches,
    })
}

/// A computed table entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelValue {
    Finite(f64),
    Infinite,
    Unknown,
}

impl ModelValue {
    pub fn from_estimate(e: &LimitEstimate) -> Self {
        match (e.status, e.value) {
            (LimitStatus::Converged, Some(v)) => ModelValue::Finite(v),
            (LimitStatus::DivergesToInfinity, _) => ModelValue::Infinite,
            _ => ModelValue::Unknown,
        }
    }
}

impl std::fmt::Display for ModelValue {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            ModelValue::Finite(v) => write!(f, "{v:.9}"),
            ModelValue::Infinite => write!(f, "INF"),
            ModelValue::Unknown => write!(f, "?"),
        }
    }
}

/// A closed-form table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceValue {
    Finite(SurdSum),
    Infinite,
}

impl ReferenceValue {
    pub fn matches(&self, computed: &ModelValue, tolerance: f64) -> bool {
        match (self, computed) {
            (ReferenceValue::Finite(x), ModelValue::Finite(v)) => (x.to_f64() - v).abs() <= tolerance,
            (ReferenceValue::Infinite, ModelValue::Infinite) => true,
            _ => false,
        }
    }
}

impl std::fmt::Display for ReferenceValue {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            ReferenceValue::Finite(x) => write!(f, "{x}"),
            ReferenceValue::Infinite => write!(f, "INF"),
        }
    }
}

/// Ball-based `h` and `h_inf` of one model.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelReport {
    pub spec: ModelSpec,
    pub horizon: usize,
    pub h: LinearCheeger,
    pub h_infinity: LimitEstimate,
}

impl ModelReport {
    pub fn h_value(&self) -> ModelValue {
        ModelValue::Finite(self.h.value)
    }

    pub fn h_infinity_value(&self) -> ModelValue {
        ModelValue::from_estimate(&self.h_infinity)
    }
}

pub fn model_report(spec: &ModelSpec, horizon: usize) -> Result<ModelReport> {
    let linear = build_linear(spec, horizon)?;
    Ok(ModelReport {
        spec: spec.clone(),
        horizon,
        h: cheeger_linear(&linear, true)?,
        h_infinity: cheeger_at_infinity(&linear)?,
    })
}

/// Closed forms `(h, h_inf, h_M, h_inf_M, h_N, h_inf_N)` for the anti-tree of
/// order `a`.
pub fn antitree_reference_row(order: u32) -> Result<[ReferenceValue; 6]> {
    if order == 0 {
        return Err(Error::InvalidSpec("anti-tree order must be at least 1".into()));
    }
    let finite = |q: Rational| SurdSum::rational(q).map(ReferenceValue::Finite);
    let two_a = Rational::from_integer(Pow::pow(BigInt::from(2), order));
    let three_a = Rational::from_integer(Pow::pow(BigInt::from(3), order));
    let h_modified = ReferenceValue::Finite(SurdSum::single(Surd::over_sqrt(
        two_a.clone(),
        &(three_a + int(1)),
    )?)?);
    let (h_infinity, h_infinity_modified) = match order {
        1 => (finite(int(2))?, finite(int(0))?),
        2 => (
            ReferenceValue::Infinite,
            ReferenceValue::Finite(SurdSum::single(Surd::over_sqrt(int(3), &int(2))?)?),
        ),
        _ => (ReferenceValue::Infinite, ReferenceValue::Infinite),
    };
    Ok([
        finite(two_a)?,
        h_infinity,
        h_modified,
        h_infinity_modified,
        finite(int(0))?,
        finite(int(0))?,
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AntiTreeRow {
    pub order: u32,
    pub physical: ModelReport,
    pub modified: ModelReport,
    pub normalized: ModelReport,
}

impl AntiTreeRow {
    /// Same column order as [`antitree_reference_row`].
    pub fn values(&self) -> [ModelValue; 6] {
        [
            self.physical.h_value(),
            self.physical.h_infinity_value(),
            self.modified.h_value(),
            self.modified.h_infinity_value(),
            self.normalized.h_value(),
            self.normalized.h_infinity_value(),
        ]
    }
}

pub fn antitree_row(order: u32, horizon: usize) -> Result<AntiTreeRow> {
    let report = |scheme| model_report(&ModelSpec::antitree(order, scheme)?, horizon);
    Ok(AntiTreeRow {
        order,
        physical: report(Scheme::Physical)?,
        modified: report(Scheme::Modified)?,
        normalized: report(Scheme::Normalized)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RapidBranching {
    /// `h_inf` of the normalized tree through the generic pipeline.
    pub pipeline: LimitEstimate,
    /// Limit of `P_r / (2 sum_{k<r} P_k + P_r)` with `P_r = m_0 ... m_r`.
    pub closed_form: LimitEstimate,
    /// The closed sequence equals the normalized ball ratios exactly.
    pub sequences_agree: bool,
}

pub fn rapidly_branching_check(branching: &Branching, horizon: usize) -> Result<RapidBranching> {
    if horizon < 10 {
        return Err(Error::InvalidSpec("horizon must be at least 10".into()));
    }
    let spec = ModelSpec::tree(branching.clone(), Scheme::Normalized)?;
    let linear = build_linear(&spec, horizon)?;
    let mut product = BigInt::one();
    let mut partial = BigInt::zero();
    let mut closed = Vec::with_capacity(horizon + 1);
    let mut sequences_agree = true;
    for r in 0..=horizon {
        product *= BigInt::from(branching.at(r));
        let term = Rational::new(product.clone(), BigInt::from(2) * &partial + &product);
        sequences_agree &= linear.ball_ratio(r)?.as_rational().as_ref() == Some(&term);
        closed.push(crate::rational::to_f64(&term));
        partial += &product;
    }
    Ok(RapidBranching {
        pipeline: cheeger_at_infinity(&linear)?,
        closed_form: estimate_limit(&closed, 0),
        sequences_agree,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeCheeger {
    pub report: ModelReport,
    /// First radius where the closed form and the generic ball ratio differ.
    pub first_disagreement: Option<usize>,
}

impl TreeCheeger {
    pub fn agrees(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

/// Per-radius closed-form ball ratio of a tree under `scheme`.
fn tree_closed_form(branching: &Branching, scheme: Scheme, r: usize) -> Result<SurdSum> {
    let m = |i: usize| BigInt::from(branching.at(i));
    let product = |upto: usize| (0..upto).fold(BigInt::one(), |acc, i| acc * m(i));
    let p_r = product(r + 1);
    let ball = (0..=r).fold(BigInt::zero(), |acc, k| acc + product(k));
    match scheme {
        Scheme::Physical => SurdSum::rational(Rational::new(p_r, ball)),
        Scheme::Normalized => {
            let below = (0..r).fold(BigInt::zero(), |acc, k| acc + product(k + 1));
            SurdSum::rational(Rational::new(p_r.clone(), BigInt::from(2) * below + p_r))
        }
        Scheme::Modified if r == 0 => {
            let m0 = Rational::from_integer(m(0));
            let split = Surd::over_sqrt(m0.clone(), &Rational::from_integer(m(1) + 1))?;
            let root = Surd::new(Rational::one(), m(0))?;
            Ok(SurdSum::single(split)?.min(SurdSum::single(root)?))
        }
        Scheme::Modified => {
            let degree = m(r + 1).max(m(r)) + 1;
            let base = Rational::new(p_r, ball);
            SurdSum::single(Surd::over_sqrt(base, &Rational::from_integer(degree))?)
        }
    }
}

/// Tree model report, with the closed-form ball ratios checked exactly
/// against the generic reduction at every radius.
pub fn tree_cheeger(branching: &Branching, scheme: Scheme, horizon: usize) -> Result<TreeCheeger> {
    if horizon < 2 {
        return Err(Error::InvalidSpec("horizon must be at least 2".into()));
    }
    let spec = ModelSpec::tree(branching.clone(), scheme)?;
    let linear = build_linear(&spec, horizon)?;
    let mut first_disagreement = None;
    for r in 0..=horizon {
        if tree_closed_form(branching, scheme, r)? != linear.ball_ratio(r)? {
            first_disagreement = Some(r);
            break;
        }
    }
    Ok(TreeCheeger {
        report: model_report(&spec, horizon)?,
        first_disagreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rationals(l: &LinearGraph) -> (Vec<Rational>, Vec<Rational>) {
        (
            l.nu_seq().to_vec(),
            l.mu_seq().iter().map(|m| m.as_rational().unwrap().clone()).collect(),
        )
    }

    #[test]
    fn binary_tree_physical_sequences() {
        let spec = ModelSpec::tree(Branching::Constant(2), Scheme::Physical).unwrap();
        let (nu, mu) = rationals(&build_linear(&spec, 3).unwrap());
        assert_eq!(nu, vec![int(1), int(2), int(4), int(8)]);
        assert_eq!(mu, vec![int(2), int(4), int(8), int(16)]);
    }

    #[test]
    fn antitree_sequences() {
        let spec = ModelSpec::antitree(1, Scheme::Physical).unwrap();
        let (nu, mu) = rationals(&build_linear(&spec, 4).unwrap());
        for r in 0..=4i64 {
            assert_eq!(nu[r as usize], int(r + 1));
            assert_eq!(mu[r as usize], int((r + 1) * (r + 2)));
        }
        let spec = ModelSpec::antitree(2, Scheme::Normalized).unwrap();
        let (nu, _) = rationals(&build_linear(&spec, 4).unwrap());
        for r in 0..=4i64 {
            let expected = r * r * (r + 1) * (r + 1) + (r + 1) * (r + 1) * (r + 2) * (r + 2);
            assert_eq!(nu[r as usize], int(expected));
        }
    }

    #[test]
    fn antitree_modified_edge_weights() {
        // mu'_r = (r+1)^a (r+2)^a / sqrt((r+1)^a + (r+3)^a)
        let spec = ModelSpec::antitree(2, Scheme::Modified).unwrap();
        let l = build_linear(&spec, 5).unwrap();
        for r in 0..=5i64 {
            let expected = Surd::over_sqrt(
                int((r + 1).pow(2) * (r + 2).pow(2)),
                &int((r + 1).pow(2) + (r + 3).pow(2)),
            )
            .unwrap();
            assert_eq!(l.mu(r as usize).unwrap(), &expected);
        }
    }

    #[test]
    fn antitree_physical_ball_ratio_is_two() {
        let spec = ModelSpec::antitree(1, Scheme::Physical).unwrap();
        let l = build_linear(&spec, 50).unwrap();
        for r in 0..=50 {
            assert_eq!(l.ball_ratio(r).unwrap().as_rational(), Some(int(2)));
        }
    }

    #[test]
    fn reference_rows() {
        let row = antitree_reference_row(1).unwrap();
        let expected = ["2", "2", "1", "0", "0", "0"];
        for (v, e) in row.iter().zip(expected) {
            assert_eq!(v.to_string(), e);
        }
        let row = antitree_reference_row(2).unwrap();
        assert_eq!(row[1], ReferenceValue::Infinite);
        assert_eq!(row[2].to_string(), "2/5*sqrt(10)");
        assert_eq!(row[3].to_string(), "3/2*sqrt(2)");
        let row = antitree_reference_row(3).unwrap();
        assert_eq!(row[0].to_string(), "8");
        // 8 / sqrt 28 = (4/7) sqrt 7
        assert_eq!(row[2].to_string(), "4/7*sqrt(7)");
        assert_eq!(row[3], ReferenceValue::Infinite);
        assert!(antitree_reference_row(0).is_err());
    }

    #[test]
    fn sphere_quotients_match_linear_graphs() {
        let spec = ModelSpec::antitree(1, Scheme::Physical).unwrap();
        let report = sphere_partition_consistency(&spec, 3).unwrap();
        assert!(report.matches);
        assert_eq!(report.quotient_nu, vec![int(1), int(2), int(3), int(4)]);
        assert_eq!(&report.quotient_mu[..3], &[int(2), int(6), int(12)]);
        let spec = ModelSpec::tree(Branching::Constant(2), Scheme::Normalized).unwrap();
        assert!(sphere_partition_consistency(&spec, 3).unwrap().matches);
        let ray = ModelSpec::tree(Branching::Constant(1), Scheme::Physical).unwrap();
        let report = sphere_partition_consistency(&ray, 5).unwrap();
        assert!(report.matches);
        assert!(report.quotient_nu.iter().all(|x| *x == int(1)));
    }

    #[test]
    fn materialization_is_capped() {
        let spec = ModelSpec::antitree(3, Scheme::Physical).unwrap();
        assert!(matches!(materialize(&spec, 12), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn transpositions_are_automorphisms() {
        let spec = ModelSpec::antitree(2, Scheme::Physical).unwrap();
        let (domain, _) = truncated_sphere_domain(&spec, 2).unwrap();
        for g in sphere_transpositions(2, 2).unwrap() {
            assert!(crate::symmetry::is_automorphism(&domain, &g));
        }
    }

    #[test]
    fn tree_closed_forms_agree() {
        for scheme in [Scheme::Physical, Scheme::Modified, Scheme::Normalized] {
            for b in [
                Branching::Constant(2),
                Branching::Arithmetic { first: 1, step: 1 },
                Branching::List(vec![3, 1, 4, 1, 5]),
            ] {
                let t = tree_cheeger(&b, scheme, 30).unwrap();
                assert!(t.agrees(), "{b:?} {scheme:?} at {:?}", t.first_disagreement);
            }
        }
    }

    #[test]
    fn binary_tree_limits() {
        let t = tree_cheeger(&Branching::Constant(2), Scheme::Physical, 200).unwrap();
        assert!((t.report.h.value - 1.0).abs() < 1e-12);
        assert_eq!(t.report.h_infinity.converged(), Some(1.0));
        let t = tree_cheeger(&Branching::Constant(2), Scheme::Normalized, 200).unwrap();
        assert!((t.report.h_infinity.converged().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rapid_branching() {
        let r = rapidly_branching_check(&Branching::Constant(3), 200).unwrap();
        assert!(r.sequences_agree);
        assert!((r.pipeline.converged().unwrap() - 0.5).abs() < 1e-9);
        assert!((r.closed_form.converged().unwrap() - 0.5).abs() < 1e-9);
        let r = rapidly_branching_check(&Branching::Arithmetic { first: 1, step: 1 }, 40).unwrap();
        assert!((r.pipeline.converged().unwrap() - 1.0).abs() < 1e-3, "{r:?}");
        let r = rapidly_branching_check(&Branching::Constant(1), 200).unwrap();
        assert_eq!(r.pipeline.converged(), Some(0.0));
    }

    #[test]
    fn spec_json() {
        let (spec, h) =
            ModelSpec::from_json(r#"{"family":"antitree","order":2,"scheme":"modified","horizon":50}"#).unwrap();
        assert_eq!(spec, ModelSpec::antitree(2, Scheme::Modified).unwrap());
        assert_eq!(h, Some(50));
        let (spec, _) = ModelSpec::from_json(r#"{"family":"tree","branching":[2,3],"scheme":"physical"}"#).unwrap();
        assert_eq!(spec.family, Family::Tree(Branching::List(vec![2, 3])));
        assert!(ModelSpec::from_json(r#"{"family":"tree","order":2,"scheme":"physical"}"#).is_err());
        assert!(ModelSpec::from_json(r#"{"family":"tree","branching":[0],"scheme":"physical"}"#).is_err());
    }

    #[test]
    fn antitree_rows_against_closed_forms() {
        for a in 1..=4 {
            let reference = antitree_reference_row(a).unwrap();
            let row = antitree_row(a, 200).unwrap();
            for (column, (expected, computed)) in reference.iter().zip(row.values()).enumerate() {
                if a == 1 && column == 2 {
                    // Balls give 2 / sqrt(2r + 4), whose infimum is 0, not the tabulated 1.
                    assert_eq!(computed, ModelValue::Finite(0.0));
                    continue;
                }
                assert!(expected.matches(&computed, 1e-9), "a={a} column {column}: {expected} vs {computed}");
            }
        }
    }
}
