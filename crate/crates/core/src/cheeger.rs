//! Exact Dirichlet Cheeger constants by subset enumeration, the co-area
//! identities behind the 1-Laplacian characterization, and the Cheeger
//! bracket for p-Laplacian eigenvalues.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirichletDomain, VertexSet};
use crate::rational::{common_denominator, to_f64, Rational};
use crate::spectral::{self, SolverConfig};
use crate::symmetry::{lump, VertexPartition};

pub const DEFAULT_CAP: usize = 24;

/// Hard limit on the subset mask width regardless of the configured cap.
const MAX_BITS: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheegerResult {
    #[serde(with = "crate::rational::serde_rational")]
    pub h: Rational,
    /// Every minimizing subset, sorted lexicographically by interior order.
    pub cuts: Vec<VertexSet>,
    pub subsets_examined: u64,
}

pub fn cheeger_exact(domain: &DirichletDomain) -> Result<CheegerResult> {
    cheeger_exact_with_cap(domain, DEFAULT_CAP)
}

pub fn cheeger_exact_with_cap(domain: &DirichletDomain, cap: usize) -> Result<CheegerResult> {
    let n = domain.len();
    if n > cap.min(MAX_BITS) {
        return Err(Error::TooLarge { size: n, cap });
    }
    let scaled = ScaledWeights::new(domain);
    let (num, den, masks) = match scaled.to_i128() {
        Some(small) => {
            let (b, v, m) = enumerate(&small);
            (BigInt::from(b), BigInt::from(v), m)
        }
        None => enumerate(&scaled),
    };
    let h = Rational::new(num, den);
    let mut cuts: Vec<VertexSet> = masks
        .into_iter()
        .map(|m| (0..n).filter(|x| m >> x & 1 == 1).collect())
        .collect();
    cuts.sort_by(|a, b| a.iter().cmp(b.iter()));
    Ok(CheegerResult {
        h,
        cuts,
        subsets_examined: (1u64 << n) - 1,
    })
}

/// The first eigenvalue of the Dirichlet 1-Laplacian, which is the Cheeger constant.
pub fn lambda_1_1(domain: &DirichletDomain) -> Result<Rational> {
    Ok(cheeger_exact(domain)?.h)
}

/// Enumerates only unions of cells. Cuts are expanded back to vertex sets.
pub fn cheeger_orbit_restricted(
    domain: &DirichletDomain,
    partition: &VertexPartition,
    cap: usize,
) -> Result<CheegerResult> {
    let lumped = lump(domain, partition)?;
    let coarse = cheeger_exact_with_cap(&lumped, cap)?;
    let mut cuts: Vec<VertexSet> = coarse
        .cuts
        .iter()
        .map(|cells| {
            cells
                .iter()
                .flat_map(|&c| partition.cells()[c].iter().copied())
                .collect()
        })
        .collect();
    cuts.sort_by(|a, b| a.iter().cmp(b.iter()));
    Ok(CheegerResult {
        h: coarse.h,
        cuts,
        subsets_examined: coarse.subsets_examined,
    })
}

/// Integer weights after clearing every denominator.
#[derive(Clone, Debug)]
struct ScaledWeights<T> {
    nu: Vec<T>,
    boundary: Vec<T>,
    /// `(neighbour, weight)` lists.
    adjacency: Vec<Vec<(usize, T)>>,
    /// Boundary weight plus interior degree.
    full_degree: Vec<T>,
}

impl ScaledWeights<BigInt> {
    fn new(domain: &DirichletDomain) -> Self {
        let n = domain.len();
        let all = (0..n)
            .flat_map(|i| [domain.nu(i), domain.boundary_weight(i)])
            .chain(domain.edges().map(|(_, _, w)| w));
        let scale = Rational::from_integer(common_denominator(all));
        let int = |q: &Rational| (q * &scale).to_integer();
        let adjacency: Vec<Vec<(usize, BigInt)>> = (0..n)
            .map(|i| domain.neighbors(i).iter().map(|(j, w)| (*j, int(w))).collect())
            .collect();
        let boundary: Vec<BigInt> = (0..n).map(|i| int(domain.boundary_weight(i))).collect();
        let full_degree = (0..n)
            .map(|i| adjacency[i].iter().map(|(_, w)| w).sum::<BigInt>() + &boundary[i])
            .collect();
        Self {
            nu: (0..n).map(|i| int(domain.nu(i))).collect(),
            boundary,
            adjacency,
            full_degree,
        }
    }

    /// Narrows to `i128` when every boundary and volume sum stays below 2^62,
    /// so that cross products in the ratio comparison cannot overflow.
    fn to_i128(&self) -> Option<ScaledWeights<i128>> {
        let limit = BigInt::from(1u64 << 62);
        let total_nu: BigInt = self.nu.iter().sum();
        let total_deg: BigInt = self.full_degree.iter().sum();
        if total_nu >= limit || total_deg >= limit {
            return None;
        }
        let small = |v: &BigInt| v.to_i128();
        Some(ScaledWeights {
            nu: self.nu.iter().map(small).collect::<Option<_>>()?,
            boundary: self.boundary.iter().map(small).collect::<Option<_>>()?,
            adjacency: self
                .adjacency
                .iter()
                .map(|l| l.iter().map(|(j, w)| small(w).map(|w| (*j, w))).collect::<Option<_>>())
                .collect::<Option<_>>()?,
            full_degree: self.full_degree.iter().map(small).collect::<Option<_>>()?,
        })
    }
}

trait Weight:
    Clone
    + Ord
    + Send
    + Sync
    + Zero
    + std::ops::AddAssign
    + std::ops::SubAssign
    + for<'a> std::ops::Mul<&'a Self, Output = Self>
{
}

impl Weight for i128 {}
impl Weight for BigInt {}

/// Best ratio `boundary / volume` with every mask attaining it.
type Best<T> = (T, T, Vec<u64>);

fn ratio_cmp<T: Weight>(b1: &T, v1: &T, b2: &T, v2: &T) -> std::cmp::Ordering {
    (b1.clone() * v2).cmp(&(b2.clone() * v1))
}

fn merge<T: Weight>(a: Option<Best<T>>, b: Option<Best<T>>) -> Option<Best<T>> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(mut a), Some(b)) => match ratio_cmp(&a.0, &a.1, &b.0, &b.1) {
            std::cmp::Ordering::Less => Some(a),
            std::cmp::Ordering::Greater => Some(b),
            std::cmp::Ordering::Equal => {
                a.2.extend(b.2);
                Some(a)
            }
        },
    }
}

/// Gray-code enumeration of every nonempty subset, split into chunks by the
/// top bits of the mask so chunks can run in parallel.
fn enumerate<T: Weight>(w: &ScaledWeights<T>) -> (T, T, Vec<u64>) {
    let n = w.nu.len();
    let top = n.min(6);
    let low = n - top;
    let best = (0u64..1 << top)
        .into_par_iter()
        .map(|prefix| enumerate_chunk(w, prefix << low, low))
        .reduce(|| None, merge);
    let (b, v, mut masks) = best.expect("a nonempty domain has a nonempty subset");
    masks.sort_unstable();
    (b, v, masks)
}

/// Change in boundary weight when `x` enters a set not containing it.
fn toggle_delta<T: Weight>(w: &ScaledWeights<T>, x: usize, mask: u64) -> T {
    let mut delta = w.full_degree[x].clone();
    for (y, mu) in &w.adjacency[x] {
        if mask >> y & 1 == 1 {
            delta -= mu.clone();
            delta -= mu.clone();
        }
    }
    delta
}

fn enumerate_chunk<T: Weight>(w: &ScaledWeights<T>, prefix: u64, low: usize) -> Option<Best<T>> {
    let n = w.nu.len();
    let mut mask = 0u64;
    let mut boundary = T::zero();
    let mut volume = T::zero();
    for x in (low..n).filter(|x| prefix >> x & 1 == 1) {
        boundary += toggle_delta(w, x, mask);
        volume += w.nu[x].clone();
        mask |= 1 << x;
    }
    let mut best: Option<Best<T>> = None;
    let consider = |mask: u64, boundary: &T, volume: &T, best: &mut Option<Best<T>>| {
        if mask == 0 {
            return;
        }
        match best {
            None => *best = Some((boundary.clone(), volume.clone(), vec![mask])),
            Some((b, v, masks)) => match ratio_cmp(boundary, volume, b, v) {
                std::cmp::Ordering::Less => {
                    *b = boundary.clone();
                    *v = volume.clone();
                    masks.clear();
                    masks.push(mask);
                }
                std::cmp::Ordering::Equal => masks.push(mask),
                std::cmp::Ordering::Greater => {}
            },
        }
    };
    consider(mask, &boundary, &volume, &mut best);
    for step in 1u64..1 << low {
        let x = step.trailing_zeros() as usize;
        let bit = 1u64 << x;
        let without = mask & !bit;
        let delta = toggle_delta(w, x, without);
        if mask & bit == 0 {
            boundary += delta;
            volume += w.nu[x].clone();
        } else {
            boundary -= delta;
            volume -= w.nu[x].clone();
        }
        mask ^= bit;
        consider(mask, &boundary, &volume, &mut best);
    }
    best
}

/// Both sides of the two co-area identities for `u = |f|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoareaReport {
    /// `E_1(|f|)`.
    pub energy: f64,
    /// Sum over levels of `gap * |boundary of {u >= level}|`.
    pub level_boundary_sum: f64,
    /// `sum nu |f|`.
    pub norm: f64,
    /// Sum over levels of `gap * |{u >= level}|_nu`.
    pub level_volume_sum: f64,
    /// `E_1(f)`, never smaller than `energy`.
    pub energy_of_f: f64,
    pub holds: bool,
}

pub const COAREA_TOLERANCE: f64 = 1e-12;

pub fn coarea_verify(domain: &DirichletDomain, f: &[f64]) -> Result<CoareaReport> {
    domain.check_dimension(f.len())?;
    if f.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroFunction);
    }
    let u: Vec<f64> = f.iter().map(|x| x.abs()).collect();
    let nu: Vec<f64> = (0..domain.len()).map(|i| to_f64(domain.nu(i))).collect();
    let bw: Vec<f64> = domain.boundary_weights().iter().map(to_f64).collect();
    let edges: Vec<(usize, usize, f64)> = domain.edges().map(|(i, j, w)| (i, j, to_f64(w))).collect();

    let mut levels: Vec<f64> = u.iter().copied().filter(|&x| x > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut level_boundary_sum = 0.0;
    let mut level_volume_sum = 0.0;
    let mut below = 0.0;
    for &t in &levels {
        let inside = |x: usize| u[x] >= t;
        let crossing: f64 = edges
            .iter()
            .filter(|(i, j, _)| inside(*i) != inside(*j))
            .map(|(_, _, w)| w)
            .sum();
        let absorbed: f64 = (0..u.len()).filter(|&x| inside(x)).map(|x| bw[x]).sum();
        let volume: f64 = (0..u.len()).filter(|&x| inside(x)).map(|x| nu[x]).sum();
        level_boundary_sum += (t - below) * (crossing + absorbed);
        level_volume_sum += (t - below) * volume;
        below = t;
    }
    let energy = spectral::dirichlet_energy(domain, 1.0, &u)?;
    let energy_of_f = spectral::dirichlet_energy(domain, 1.0, f)?;
    let norm: f64 = u.iter().zip(&nu).map(|(x, w)| x * w).sum();
    let close = |a: f64, b: f64| (a - b).abs() <= COAREA_TOLERANCE * a.abs().max(b.abs()).max(1.0);
    Ok(CoareaReport {
        holds: close(energy, level_boundary_sum)
            && close(norm, level_volume_sum)
            && energy <= energy_of_f * (1.0 + COAREA_TOLERANCE) + COAREA_TOLERANCE,
        energy,
        level_boundary_sum,
        norm,
        level_volume_sum,
        energy_of_f,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsRow {
    pub p: f64,
    /// `2^(p-1) (h/p)^p`.
    pub lower: f64,
    /// Smallest Rayleigh quotient found: the solver result or the quotient of
    /// a Cheeger cut indicator, whichever is lower.
    pub lambda: f64,
    pub h: f64,
    pub lambda_certified: bool,
    pub upper_holds: bool,
    /// Diagnostic only.
    pub lower_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    #[serde(with = "crate::rational::serde_rational")]
    pub h: Rational,
    pub rows: Vec<BoundsRow>,
}

pub fn cheeger_bounds_report(
    domain: &DirichletDomain,
    ps: &[f64],
    cfg: &SolverConfig,
) -> Result<BoundsReport> {
    domain.check_normalized()?;
    let cheeger = cheeger_exact(domain)?;
    let h = to_f64(&cheeger.h);
    let indicator: Vec<f64> = (0..domain.len())
        .map(|x| if cheeger.cuts[0].contains(&x) { 1.0 } else { 0.0 })
        .collect();
    let rows = ps
        .iter()
        .map(|&p| {
            let pair = spectral::first_eigenpair_best_effort(domain, p, cfg)?;
            let cut_quotient = spectral::rayleigh_quotient(domain, p, &indicator)?;
            let lambda = pair.lambda.min(cut_quotient);
            let lower = 2f64.powf(p - 1.0) * (h / p).powf(p);
            let slack = 1e-9 * h.max(1.0);
            Ok(BoundsRow {
                p,
                lower,
                lambda,
                h,
                lambda_certified: pair.certified && pair.lambda <= cut_quotient,
                upper_holds: lambda <= h + slack,
                lower_holds: lower <= lambda + slack,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundsReport { h: cheeger.h, rows })
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
    fn singleton_constant() {
        let d = fixtures::singleton(int(3), int(2));
        let r = cheeger_exact(&d).unwrap();
        assert_eq!(r.h, ratio(2, 3));
        assert_eq!(r.cuts, vec![set(&[0])]);
        assert_eq!(r.subsets_examined, 1);
    }

    #[test]
    fn path_domain_has_unique_cut() {
        let r = cheeger_exact(&fixtures::path5_domain()).unwrap();
        assert_eq!(r.h, ratio(1, 3));
        assert_eq!(r.cuts, vec![set(&[0, 1, 2])]);
        assert_eq!(r.subsets_examined, 7);
    }

    #[test]
    fn cap_is_enforced() {
        let d = fixtures::pendant_triangle_domain();
        assert_eq!(
            cheeger_exact_with_cap(&d, 4),
            Err(Error::TooLarge { size: 5, cap: 4 })
        );
    }

    #[test]
    fn bigint_path_matches_small_path() {
        // Weights whose common denominator pushes the sums beyond 2^62.
        let huge = Rational::new(BigInt::from(1), BigInt::from(1u128 << 70));
        let d = DirichletDomain::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![int(1), int(2), int(1)],
            vec![(0, 1, int(1)), (1, 2, int(1))],
            vec![huge.clone(), int(0), int(0)],
        )
        .unwrap();
        assert!(ScaledWeights::new(&d).to_i128().is_none());
        let r = cheeger_exact(&d).unwrap();
        assert_eq!(r.h, huge / int(4));
        assert_eq!(r.cuts, vec![set(&[0, 1, 2])]);
    }

    #[test]
    fn coarea_on_three_path() {
        let d = fixtures::path5_domain();
        let rep = coarea_verify(&d, &[1.0, 2.0, 3.0]).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.energy, 1.0 + 1.0 + 1.0 + 3.0);
        assert_eq!(rep.norm, 12.0);
        assert_eq!(coarea_verify(&d, &[0.0; 3]), Err(Error::ZeroFunction));
    }

    #[test]
    fn bounds_on_singleton() {
        let d = fixtures::singleton(int(2), int(2));
        let rep = cheeger_bounds_report(&d, &[2.0], &SolverConfig::default()).unwrap();
        assert_eq!(rep.h, int(1));
        assert!(rep.rows[0].upper_holds && rep.rows[0].lower_holds);
        assert!((rep.rows[0].lambda - 1.0).abs() < 1e-12);
    }
}
