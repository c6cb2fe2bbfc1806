//! Automorphisms of Dirichlet domains, orbit partitions, quotient domains and
//! the invariance of eigenvalues and Cheeger constants under quotienting.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::cheeger::{cheeger_exact, CheegerResult};
use crate::error::{Error, Result};
use crate::graph::{DirichletDomain, VertexSet};
use crate::rational::Rational;
use crate::spectral::{first_eigenpair, EigenPair, SolverConfig};

pub const DEFAULT_CAP: usize = 12;

/// Groups larger than this are not materialized.
pub const MAX_GROUP_SIZE: usize = 1_000_000;

/// Cells of a partition of the interior, each sorted, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    cells: Vec<VertexSet>,
    #[serde(skip)]
    cell_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(n: usize, cells: Vec<VertexSet>) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; n];
        let mut cells = cells;
        cells.sort_by_key(|c| c.iter().next().copied());
        for (k, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::InvalidPartition("empty cell".into()));
            }
            for &x in cell {
                if x >= n {
                    return Err(Error::InvalidPartition(format!("index {x} outside the domain")));
                }
                if cell_of[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {x} lies in two cells")));
                }
                cell_of[x] = k;
            }
        }
        if let Some(x) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {x} is not covered")));
        }
        Ok(Self { cells, cell_of })
    }

    pub fn from_ids<S: AsRef<str>>(domain: &DirichletDomain, cells: &[Vec<S>]) -> Result<Self> {
        let cells = cells
            .iter()
            .map(|c| {
                domain.vertex_set(c).map_err(|e| match e {
                    Error::UnknownVertex(id) => Error::InvalidPartition(format!("unknown vertex `{id}`")),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain.len(), cells)
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            cells: (0..n).map(|x| VertexSet::from([x])).collect(),
            cell_of: (0..n).collect(),
        }
    }

    pub fn cells(&self) -> &[VertexSet] {
        &self.cells
    }

    pub fn cell_of(&self, x: usize) -> usize {
        self.cell_of[x]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn domain_size(&self) -> usize {
        self.cell_of.len()
    }

    pub fn is_union_of_cells(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|&x| self.cells[self.cell_of[x]].iter().all(|y| set.contains(y)))
    }

    pub fn cell_ids(&self, domain: &DirichletDomain) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|c| c.iter().map(|&x| domain.id(x).to_string()).collect())
            .collect()
    }
}

/// Explicit permutation group on interior indices; `elements[0]` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismGroup {
    elements: Vec<Vec<usize>>,
}

impl AutomorphismGroup {
    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].len()
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(perm)).is_ok()
    }
}

pub fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (x, &y) in perm.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Preserves measures, interior weights and boundary weights.
pub fn is_automorphism(domain: &DirichletDomain, perm: &[usize]) -> bool {
    let n = domain.len();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in perm {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    (0..n).all(|x| {
        domain.nu(perm[x]) == domain.nu(x)
            && domain.boundary_weight(perm[x]) == domain.boundary_weight(x)
            && domain.neighbors(x).len() == domain.neighbors(perm[x]).len()
            && domain
                .neighbors(x)
                .iter()
                .all(|(y, w)| domain.edge_weight(perm[x], perm[*y]) == Some(w))
    })
}

/// Pruning key: measure, boundary weight and the sorted incident weights.
fn signature(domain: &DirichletDomain, x: usize) -> (Rational, Rational, Vec<Rational>) {
    let mut incident: Vec<Rational> = domain.neighbors(x).iter().map(|(_, w)| w.clone()).collect();
    incident.sort();
    (domain.nu(x).clone(), domain.boundary_weight(x).clone(), incident)
}

pub fn enumerate_automorphisms(domain: &DirichletDomain, cap: usize) -> Result<AutomorphismGroup> {
    let n = domain.len();
    if n > cap {
        return Err(Error::TooLarge { size: n, cap });
    }
    let signatures: Vec<_> = (0..n).map(|x| signature(domain, x)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| signatures[y] == signatures[x]).collect())
        .collect();
    let mut elements = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(domain, &candidates, 0, &mut image, &mut used, &mut elements)?;
    elements.sort();
    Ok(AutomorphismGroup { elements })
}

fn search(
    domain: &DirichletDomain,
    candidates: &[Vec<usize>],
    x: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let n = image.len();
    if x == n {
        if out.len() >= MAX_GROUP_SIZE {
            return Err(Error::TooLarge {
                size: out.len() + 1,
                cap: MAX_GROUP_SIZE,
            });
        }
        out.push(image.clone());
        return Ok(());
    }
    for &y in &candidates[x] {
        if used[y] {
            continue;
        }
        // Weights to every earlier vertex must be carried over exactly.
        let consistent = (0..x).all(|z| domain.edge_weight(x, z) == domain.edge_weight(y, image[z]));
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        search(domain, candidates, x + 1, image, used, out)?;
        used[y] = false;
        image[x] = usize::MAX;
    }
    Ok(())
}

/// Union-find over "some permutation maps x to y".
fn orbit_partition(n: usize, perms: &[Vec<usize>]) -> VertexPartition {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for perm in perms {
        for (x, &y) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut cells: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        cells.entry(r).or_default().insert(x);
    }
    VertexPartition::new(n, cells.into_values().collect()).expect("orbits partition the vertex set")
}

pub fn orbits(group: &AutomorphismGroup) -> VertexPartition {
    orbit_partition(group.degree(), &group.elements)
}

/// Orbits of the group generated by `generators`, each of which must be an
/// automorphism of `domain`.
pub fn orbits_of_generators(domain: &DirichletDomain, generators: &[Vec<usize>]) -> Result<VertexPartition> {
    if let Some(bad) = generators.iter().find(|g| !is_automorphism(domain, g)) {
        return Err(Error::InvalidPartition(format!(
            "permutation {bad:?} is not an automorphism of the domain"
        )));
    }
    Ok(orbit_partition(domain.len(), generators))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquitableReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

pub fn validate_equitable(domain: &DirichletDomain, partition: &VertexPartition) -> Result<EquitableReport> {
    if partition.domain_size() != domain.len() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, domain has {}",
            partition.domain_size(),
            domain.len()
        )));
    }
    let k = partition.len();
    let mut violations = Vec::new();
    // Per vertex: measure, boundary weight and the weight sum into every cell.
    let profile = |x: usize| -> (Rational, Rational, Vec<Rational>) {
        let mut sums = vec![Rational::zero(); k];
        for (y, w) in domain.neighbors(x) {
            sums[partition.cell_of(*y)] += w;
        }
        (domain.nu(x).clone(), domain.boundary_weight(x).clone(), sums)
    };
    for (c, cell) in partition.cells().iter().enumerate() {
        let mut members = cell.iter().copied();
        let first = members.next().expect("cells are nonempty");
        let reference = profile(first);
        for x in members {
            let (nu, bw, sums) = profile(x);
            let (a, b) = (domain.id(first), domain.id(x));
            if nu != reference.0 {
                violations.push(format!("nu differs within cell {c}: `{a}` has {}, `{b}` has {nu}", reference.0));
            }
            if bw != reference.1 {
                violations.push(format!(
                    "boundary weight differs within cell {c}: `{a}` has {}, `{b}` has {bw}",
                    reference.1
                ));
            }
            for (d, (s, r)) in sums.iter().zip(&reference.2).enumerate() {
                if s != r {
                    violations.push(format!(
                        "weight into cell {d} differs within cell {c}: `{a}` has {r}, `{b}` has {s}"
                    ));
                }
            }
        }
    }
    Ok(EquitableReport {
        valid: violations.is_empty(),
        violations,
    })
}

/// Collapses each cell to one vertex by summing measures, crossing weights
/// and boundary weights; within-cell edges are dropped. No equitability check.
pub fn lump(domain: &DirichletDomain, partition: &VertexPartition) -> Result<DirichletDomain> {
    if partition.domain_size() != domain.len() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, domain has {}",
            partition.domain_size(),
            domain.len()
        )));
    }
    let k = partition.len();
    let mut nu = vec![Rational::zero(); k];
    let mut boundary = vec![Rational::zero(); k];
    let mut cross: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for x in 0..domain.len() {
        let c = partition.cell_of(x);
        nu[c] += domain.nu(x);
        boundary[c] += domain.boundary_weight(x);
    }
    for (i, j, w) in domain.edges() {
        let (a, b) = (partition.cell_of(i), partition.cell_of(j));
        if a != b {
            *cross.entry((a.min(b), a.max(b))).or_insert_with(Rational::zero) += w;
        }
    }
    let ids = partition
        .cells()
        .iter()
        .map(|cell| {
            let names: Vec<&str> = cell.iter().map(|&x| domain.id(x)).collect();
            if names.len() == 1 {
                names[0].to_string()
            } else {
                format!("[{}]", names.join(","))
            }
        })
        .collect();
    DirichletDomain::new(
        ids,
        nu,
        cross.into_iter().map(|((a, b), w)| (a, b, w)).collect(),
        boundary,
    )
}

/// Quotient domain of an equitable partition.
pub fn quotient(domain: &DirichletDomain, partition: &VertexPartition) -> Result<DirichletDomain> {
    let report = validate_equitable(domain, partition)?;
    if !report.valid {
        return Err(Error::NotEquitable(report.violations.join("; ")));
    }
    lump(domain, partition)
}

/// Extends a function on cells to the interior, constant on each cell.
pub fn lift(partition: &VertexPartition, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != partition.len() {
        return Err(Error::DimensionMismatch {
            expected: partition.len(),
            found: f.len(),
        });
    }
    Ok((0..partition.domain_size())
        .map(|x| f[partition.cell_of(x)])
        .collect())
}

/// How a partition was shown to come from symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionOrigin {
    /// The cells are the orbits of a group of automorphisms.
    GroupOrbits,
    /// Equitable, but not shown to be an orbit partition.
    EquitableOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceRow {
    pub p: f64,
    pub lambda_original: f64,
    pub lambda_quotient: f64,
    pub difference: f64,
    /// Largest spread of the original first eigenfunction within one cell.
    pub cell_spread: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceReport {
    pub origin: PartitionOrigin,
    pub rows: Vec<InvarianceRow>,
    #[serde(with = "crate::rational::serde_rational")]
    pub h_original: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub h_quotient: Rational,
    /// A minimizing cut of the original domain that is a union of cells.
    pub cell_union_cut: Option<VertexSet>,
    #[serde(skip)]
    pub pairs: Vec<EigenPair>,
}

pub const LAMBDA_AGREEMENT: f64 = 1e-7;
pub const CELL_SPREAD_TOLERANCE: f64 = 1e-6;

impl InvarianceReport {
    pub fn lambdas_agree(&self) -> bool {
        self.rows.iter().all(|r| r.difference <= LAMBDA_AGREEMENT)
    }

    pub fn h_equal(&self) -> bool {
        self.h_original == self.h_quotient
    }

    pub fn eigenfunctions_cell_constant(&self) -> bool {
        self.rows.iter().all(|r| r.cell_spread <= CELL_SPREAD_TOLERANCE)
    }

    /// Everything the symmetry theorems promise for this partition.
    pub fn holds(&self) -> bool {
        self.lambdas_agree()
            && self.h_equal()
            && self.cell_union_cut.is_some()
            && self.eigenfunctions_cell_constant()
    }
}

/// Origin check through the full automorphism group: the cells must be the
/// orbits of the subgroup fixing every cell setwise.
pub fn partition_origin(domain: &DirichletDomain, partition: &VertexPartition, cap: usize) -> Result<PartitionOrigin> {
    let group = enumerate_automorphisms(domain, cap)?;
    let stabilizer: Vec<Vec<usize>> = group
        .elements()
        .iter()
        .filter(|g| (0..g.len()).all(|x| partition.cell_of(g[x]) == partition.cell_of(x)))
        .cloned()
        .collect();
    Ok(if orbit_partition(domain.len(), &stabilizer) == *partition {
        PartitionOrigin::GroupOrbits
    } else {
        PartitionOrigin::EquitableOnly
    })
}

/// Origin check through explicit generators (useful beyond the enumeration cap).
pub fn partition_origin_from_generators(
    domain: &DirichletDomain,
    partition: &VertexPartition,
    generators: &[Vec<usize>],
) -> Result<PartitionOrigin> {
    let orbit_cells = orbits_of_generators(domain, generators)?;
    Ok(if orbit_cells == *partition {
        PartitionOrigin::GroupOrbits
    } else {
        PartitionOrigin::EquitableOnly
    })
}

pub fn verify_quotient_invariance(
    domain: &DirichletDomain,
    partition: &VertexPartition,
    ps: &[f64],
    cfg: &SolverConfig,
) -> Result<InvarianceReport> {
    let origin = if domain.len() <= DEFAULT_CAP {
        partition_origin(domain, partition, DEFAULT_CAP)?
    } else {
        PartitionOrigin::EquitableOnly
    };
    invariance_with_origin(domain, partition, origin, ps, cfg)
}

pub fn verify_quotient_invariance_with_generators(
    domain: &DirichletDomain,
    partition: &VertexPartition,
    generators: &[Vec<usize>],
    ps: &[f64],
    cfg: &SolverConfig,
) -> Result<InvarianceReport> {
    let origin = partition_origin_from_generators(domain, partition, generators)?;
    invariance_with_origin(domain, partition, origin, ps, cfg)
}

fn invariance_with_origin(
    domain: &DirichletDomain,
    partition: &VertexPartition,
    origin: PartitionOrigin,
    ps: &[f64],
    cfg: &SolverConfig,
) -> Result<InvarianceReport> {
    let q = quotient(domain, partition)?;
    let mut rows = Vec::with_capacity(ps.len());
    let mut pairs = Vec::with_capacity(2 * ps.len());
    for &p in ps {
        let original = first_eigenpair(domain, p, cfg)?;
        let reduced = first_eigenpair(&q, p, cfg)?;
        let cell_spread = partition
            .cells()
            .iter()
            .map(|cell| {
                let values: Vec<f64> = cell.iter().map(|&x| original.u[x]).collect();
                let hi = values.iter().copied().fold(f64::MIN, f64::max);
                let lo = values.iter().copied().fold(f64::MAX, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max);
        rows.push(InvarianceRow {
            p,
            lambda_original: original.lambda,
            lambda_quotient: reduced.lambda,
            difference: (original.lambda - reduced.lambda).abs(),
            cell_spread,
        });
        pairs.push(original);
        pairs.push(reduced);
    }
    let CheegerResult { h: h_original, cuts, .. } = cheeger_exact(domain)?;
    let h_quotient = cheeger_exact(&q)?.h;
    let cell_union_cut = cuts.into_iter().find(|c| partition.is_union_of_cells(c));
    Ok(InvarianceReport {
        origin,
        rows,
        h_original,
        h_quotient,
        cell_union_cut,
        pairs,
    })
}

/// Checks closure, inverses and the identity on an explicit group.
pub fn check_group_axioms(group: &AutomorphismGroup) -> bool {
    let n = group.degree();
    let identity: Vec<usize> = (0..n).collect();
    let elements: BTreeSet<&Vec<usize>> = group.elements().iter().collect();
    elements.contains(&identity)
        && group.elements().iter().all(|g| group.contains(&inverse(g)))
        && group
            .elements()
            .iter()
            .all(|a| group.elements().iter().all(|b| group.contains(&compose(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn path_domain_reflection() {
        let d = fixtures::path5_domain();
        let g = enumerate_automorphisms(&d, DEFAULT_CAP).unwrap();
        assert_eq!(g.elements(), &[vec![0, 1, 2], vec![2, 1, 0]]);
        assert!(check_group_axioms(&g));
        assert_eq!(orbits(&g).cells(), &[set(&[0, 2]), set(&[1])]);
    }

    #[test]
    fn symmetric_triangle_has_full_group() {
        let d = fixtures::triangle_domain();
        let g = enumerate_automorphisms(&d, DEFAULT_CAP).unwrap();
        assert_eq!(g.size(), 6);
        assert_eq!(orbits(&g).len(), 1);
    }

    #[test]
    fn distinct_measures_leave_identity_only() {
        let d = DirichletDomain::new(
            vec!["a".into(), "b".into()],
            vec![int(1), int(2)],
            vec![(0, 1, int(1))],
            vec![int(1), int(1)],
        )
        .unwrap();
        assert_eq!(enumerate_automorphisms(&d, DEFAULT_CAP).unwrap().size(), 1);
        assert_eq!(
            enumerate_automorphisms(&d, 1),
            Err(Error::TooLarge { size: 2, cap: 1 })
        );
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::new(3, vec![set(&[0, 1])]).is_err());
        assert!(VertexPartition::new(3, vec![set(&[0, 1]), set(&[1, 2])]).is_err());
        assert!(VertexPartition::new(2, vec![set(&[0]), set(&[1]), VertexSet::new()]).is_err());
        let p = VertexPartition::new(3, vec![set(&[1]), set(&[2, 0])]).unwrap();
        assert_eq!(p.cells(), &[set(&[0, 2]), set(&[1])]);
    }

    #[test]
    fn equitability() {
        let d = fixtures::path5_domain();
        let cells = VertexPartition::new(3, vec![set(&[0, 2]), set(&[1])]).unwrap();
        assert!(validate_equitable(&d, &cells).unwrap().valid);
        assert!(validate_equitable(&d, &VertexPartition::singletons(3)).unwrap().valid);

        let f = fixtures::pendant_triangle_domain();
        let bad = VertexPartition::from_ids(&f, &[vec!["v1", "v4"], vec!["v2", "v5"], vec!["v3"]]).unwrap();
        let report = validate_equitable(&f, &bad).unwrap();
        assert!(!report.valid);
        assert!(report.violations[0].starts_with("nu differs"));
        assert!(matches!(quotient(&f, &bad), Err(Error::NotEquitable(_))));
    }

    #[test]
    fn path_domain_quotient() {
        let d = fixtures::path5_domain();
        let cells = VertexPartition::new(3, vec![set(&[0, 2]), set(&[1])]).unwrap();
        let q = quotient(&d, &cells).unwrap();
        assert_eq!(q.ids(), &["[v1,v3]", "v2"]);
        assert_eq!(q.nu(0), &int(4));
        assert_eq!(q.nu(1), &int(2));
        assert_eq!(q.edge_weight(0, 1), Some(&int(2)));
        assert_eq!(q.boundary_weights(), &[int(2), int(0)]);
    }

    #[test]
    fn lift_is_cell_constant() {
        let cells = VertexPartition::new(3, vec![set(&[0, 2]), set(&[1])]).unwrap();
        assert_eq!(lift(&cells, &[1.5, -2.0]).unwrap(), vec![1.5, -2.0, 1.5]);
        assert!(lift(&cells, &[1.0]).is_err());
        let id = VertexPartition::singletons(3);
        assert_eq!(lift(&id, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn origin_detection() {
        let d = fixtures::path5_domain();
        let cells = VertexPartition::new(3, vec![set(&[0, 2]), set(&[1])]).unwrap();
        assert_eq!(partition_origin(&d, &cells, DEFAULT_CAP).unwrap(), PartitionOrigin::GroupOrbits);
        assert_eq!(
            partition_origin_from_generators(&d, &cells, &[vec![2, 1, 0]]).unwrap(),
            PartitionOrigin::GroupOrbits
        );
        assert!(orbits_of_generators(&d, &[vec![1, 0, 2]]).is_err());
    }
}
