//! One-dimensional linear graphs: the path `0 - 1 - 2 - ...` with vertex
//! measures `nu_i` and edge weights `mu_i` between `i` and `i + 1`.
//!
//! Spherically symmetric graphs reduce to such paths (one vertex per sphere),
//! and their Cheeger constants are minima over balls `{0..=r}` or annuli
//! `{k+1..=r}` of the path.

pub mod limit;
pub mod models;
pub mod surd;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DirichletDomain;
use crate::rational::{to_f64, Rational};

pub use limit::{estimate_limit, LimitEstimate, LimitMethod, LimitStatus, SequenceSource};
pub use models::{
    antitree_reference_row, antitree_row, build_linear, materialize, model_report,
    rapidly_branching_check, sphere_partition_consistency, sphere_transpositions, tree_cheeger,
    AntiTreeRow, Branching, Family, ModelReport, ModelSpec, ModelValue, RapidBranching,
    ReferenceValue, Scheme, SphereConsistency, TreeCheeger, truncated_sphere_domain,
};
pub use surd::{difference_quotient, Surd, SurdSum};

/// A linear graph materialized on indices `0..=horizon`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearGraph {
    nu: Vec<Rational>,
    mu: Vec<Surd>,
    /// `volumes[r] = nu_0 + ... + nu_r`.
    volumes: Vec<Rational>,
}

impl LinearGraph {
    pub fn new(nu: Vec<Rational>, mu: Vec<Surd>) -> Result<Self> {
        if nu.len() != mu.len() {
            return Err(Error::DimensionMismatch {
                expected: nu.len(),
                found: mu.len(),
            });
        }
        if nu.len() < 2 {
            return Err(Error::InvalidSpec("a linear graph needs horizon at least 1".into()));
        }
        if let Some(i) = nu.iter().position(|x| !x.is_positive()) {
            return Err(Error::InvalidWeight(format!("nu_{i}"), "must be positive".into()));
        }
        if let Some(i) = mu.iter().position(|x| !x.coeff().is_positive()) {
            return Err(Error::InvalidWeight(format!("mu_{i}"), "must be positive".into()));
        }
        let mut volumes = Vec::with_capacity(nu.len());
        let mut total = Rational::zero();
        for x in &nu {
            total += x;
            volumes.push(total.clone());
        }
        Ok(Self { nu, mu, volumes })
    }

    pub fn from_rationals(nu: Vec<Rational>, mu: Vec<Rational>) -> Result<Self> {
        Self::new(nu, mu.into_iter().map(Surd::rational).collect())
    }

    pub fn horizon(&self) -> usize {
        self.nu.len() - 1
    }

    pub fn nu_seq(&self) -> &[Rational] {
        &self.nu
    }

    pub fn mu_seq(&self) -> &[Surd] {
        &self.mu
    }

    fn check(&self, r: usize) -> Result<()> {
        if r > self.horizon() {
            return Err(Error::HorizonExceeded {
                requested: r,
                horizon: self.horizon(),
            });
        }
        Ok(())
    }

    pub fn nu(&self, i: usize) -> Result<&Rational> {
        self.check(i)?;
        Ok(&self.nu[i])
    }

    pub fn mu(&self, i: usize) -> Result<&Surd> {
        self.check(i)?;
        Ok(&self.mu[i])
    }

    /// The same graph cut back to `0..=horizon`.
    pub fn truncate(&self, horizon: usize) -> Result<Self> {
        self.check(horizon)?;
        Self::new(self.nu[..=horizon].to_vec(), self.mu[..=horizon].to_vec())
    }

    /// `|B_r| = nu_0 + ... + nu_r`.
    pub fn ball_volume(&self, r: usize) -> Result<&Rational> {
        self.check(r)?;
        Ok(&self.volumes[r])
    }

    /// `|A_{k,r}| = nu_{k+1} + ... + nu_r` for `k < r`.
    pub fn annulus_volume(&self, k: usize, r: usize) -> Result<Rational> {
        self.check(r)?;
        if k >= r {
            return Err(Error::InvalidSpec(format!("annulus needs k < r, got k={k}, r={r}")));
        }
        Ok(&self.volumes[r] - &self.volumes[k])
    }

    /// `|dB_r| / |B_r| = mu_r / |B_r|`.
    pub fn ball_ratio(&self, r: usize) -> Result<SurdSum> {
        self.check(r)?;
        SurdSum::single(self.mu[r].scale(&self.volumes[r].recip()))
    }

    /// `(mu_k + mu_r) / |A_{k,r}|`.
    pub fn annulus_ratio(&self, k: usize, r: usize) -> Result<SurdSum> {
        let volume = self.annulus_volume(k, r)?;
        Ok(SurdSum::pair(self.mu[k].clone(), self.mu[r].clone())?.divide(&volume))
    }

    /// Stolz-Cesaro term `(mu_r - mu_{r-1}) / nu_r` with `mu_{-1} = 0`.
    pub fn stolz_cesaro(&self, r: usize) -> Result<f64> {
        self.check(r)?;
        if r == 0 {
            return Ok(self.mu[0].to_f64() / to_f64(&self.nu[0]));
        }
        Ok(difference_quotient(&self.mu[r], &self.mu[r - 1], &self.nu[r]))
    }

    /// Heuristic for `sum nu_i = infinity`: `r nu_r` does not decay between
    /// three quarters of the horizon and the horizon, so `nu_r` is not summable
    /// at any faster-than-harmonic rate.
    pub fn has_infinite_volume(&self) -> bool {
        let h = self.horizon();
        let q = (3 * h / 4).max(1);
        if q >= h {
            return false;
        }
        let weighted = |r: usize| to_f64(&self.nu[r]) * r as f64;
        weighted(h) >= 0.99 * weighted(q)
    }

    /// Finite path as a Dirichlet domain. With the root, the domain is
    /// `{0..size-1}` and the last vertex loses `mu_{size-1}` to the outside.
    /// Without it, the domain is `{1..=size}` and loses `mu_0` and `mu_size`.
    /// Ids are the path indices. Needs rational edge weights.
    pub fn domain(&self, contains_root: bool, size: usize) -> Result<DirichletDomain> {
        if size == 0 {
            return Err(Error::EmptyDomain);
        }
        let first = usize::from(!contains_root);
        let last = first + size - 1;
        self.check(last)?;
        let weight = |i: usize| {
            self.mu[i]
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::InvalidSpec(format!("mu_{i} is irrational")))
        };
        let ids = (first..=last).map(|i| i.to_string()).collect();
        let nu = self.nu[first..=last].to_vec();
        let edges = (first..last)
            .map(|i| Ok((i - first, i - first + 1, weight(i)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut boundary = vec![Rational::zero(); size];
        boundary[size - 1] += weight(last)?;
        if !contains_root {
            boundary[0] += weight(0)?;
        }
        DirichletDomain::new(ids, nu, edges, boundary)
    }
}

/// Finite-horizon Cheeger minimum together with the tail behaviour.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LinearCheeger {
    /// Exact minimum over the materialized balls or annuli.
    #[serde(serialize_with = "display")]
    pub finite_min: SurdSum,
    /// `(k, r)` of the minimizing annulus; `k` is `None` for a ball.
    pub argmin: (Option<usize>, usize),
    pub tail: LimitEstimate,
    /// The tail limit when it converges below the finite minimum, else the minimum.
    pub value: f64,
    /// Whether the reported value is attained by a materialized set.
    pub attained: bool,
}

fn display<S: serde::Serializer>(x: &SurdSum, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Cheeger constant of the path or of the path without its root, computed
/// over balls or over annuli respectively.
pub fn cheeger_linear(graph: &LinearGraph, contains_root: bool) -> Result<LinearCheeger> {
    let h = graph.horizon();
    if h < 2 {
        return Err(Error::InvalidSpec("horizon must be at least 2".into()));
    }
    // Per-r minimum with its argmin.
    let per_r: Vec<(SurdSum, Option<usize>)> = if contains_root {
        (0..=h)
            .into_par_iter()
            .map(|r| Ok((graph.ball_ratio(r)?, None)))
            .collect::<Result<_>>()?
    } else {
        (1..=h)
            .into_par_iter()
            .map(|r| {
                let mut best: Option<(SurdSum, usize)> = None;
                for k in 0..r {
                    let ratio = graph.annulus_ratio(k, r)?;
                    if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                        best = Some((ratio, k));
                    }
                }
                let (ratio, k) = best.expect("r >= 1 has an annulus");
                Ok((ratio, Some(k)))
            })
            .collect::<Result<_>>()?
    };
    let first_r = usize::from(!contains_root);
    let (offset, (finite_min, k)) = per_r
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        .map(|(i, x)| (i, x.clone()))
        .expect("nonempty range");
    let floats: Vec<f64> = per_r.iter().map(|(x, _)| x.to_f64()).collect();
    let tail = estimate_limit(&floats, first_r).with_source(if contains_root {
        SequenceSource::BallRatios
    } else {
        SequenceSource::Annuli
    });
    let min_f = finite_min.to_f64();
    let (value, attained) = match tail.converged() {
        Some(limit) if limit < min_f => (limit, false),
        _ => (min_f, true),
    };
    Ok(LinearCheeger {
        finite_min,
        argmin: (k, offset + first_r),
        tail,
        value,
        attained,
    })
}

/// `liminf |dB_r| / |B_r|`, read from the Stolz-Cesaro differences first and
/// from the ball ratios second. Without infinite volume only a settled annulus
/// sequence gives a verdict.
pub fn cheeger_at_infinity(graph: &LinearGraph) -> Result<LimitEstimate> {
    let h = graph.horizon();
    if h < 4 {
        return Err(Error::InvalidSpec("horizon must be at least 4".into()));
    }
    if graph.has_infinite_volume() {
        let differences = (1..=h).map(|r| graph.stolz_cesaro(r)).collect::<Result<Vec<_>>>()?;
        let estimate = estimate_limit(&differences, 1);
        if estimate.is_conclusive() {
            return Ok(estimate.with_source(SequenceSource::StolzCesaro));
        }
        let balls = (0..=h)
            .map(|r| graph.ball_ratio(r).map(|x| x.to_f64()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(estimate_limit(&balls, 0).with_source(SequenceSource::BallRatios));
    }
    // inf over annuli starting at r, for r = 0..h-1.
    let inner: Vec<f64> = (0..h)
        .into_par_iter()
        .map(|k| {
            ((k + 1)..=h)
                .map(|r| graph.annulus_ratio(k, r).map(|x| x.to_f64()))
                .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x)))
        })
        .collect::<Result<_>>()?;
    let estimate = estimate_limit(&inner, 0).with_source(SequenceSource::Annuli);
    if estimate.method == LimitMethod::Spread {
        Ok(estimate)
    } else {
        Ok(LimitEstimate::inconclusive(estimate.window, estimate.tail_values).with_source(SequenceSource::Annuli))
    }
}

/// `|A_{-1,r}| = |B_r|` and `|dA_{k,r}| = mu_k + mu_r`, checked exactly.
pub fn annulus_identities_hold(graph: &LinearGraph) -> bool {
    let h = graph.horizon();
    (0..h).all(|k| {
        ((k + 1)..=h).all(|r| {
            let volume = graph.annulus_volume(k, r).expect("in range");
            let boundary = SurdSum::pair(graph.mu[k].clone(), graph.mu[r].clone()).expect("positive");
            volume == &graph.volumes[r] - &graph.volumes[k]
                && graph.annulus_ratio(k, r).expect("in range") == boundary.divide(&volume)
        })
    }) && (0..=h).all(|r| graph.volumes[r] == graph.nu[..=r].iter().fold(Rational::zero(), |a, b| a + b))
}
