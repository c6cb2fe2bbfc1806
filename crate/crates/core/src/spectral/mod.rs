//! The Dirichlet p-Laplacian, its energy and Rayleigh quotient, and solvers for
//! the first and (on bipartite domains) the maximum eigenpair.

mod first;
mod maximum;
mod polish;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, DirichletDomain};

pub use first::{first_eigenpair, first_eigenpair_best_effort};
use polish::polish;
pub use maximum::{max_eigenpair_bipartite, reformulated_gradient, reformulated_objective};

/// Differences below this magnitude are treated as exact zeros.
pub const ZERO_DIFFERENCE: f64 = 1e-12;

/// Exponents below this value trigger an ill-conditioning warning.
pub const NEAR_ONE_WARNING: f64 = 1.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub step_shrink: f64,
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200_000,
            residual_tol: 1e-10,
            step_shrink: 0.5,
            restarts: 4,
            rng_seed: 0x5eed,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.residual_tol.is_nan() || self.residual_tol <= 0.0 {
            return Err(Error::InvalidSpec("residual tolerance must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidSpec("at least one restart is required".into()));
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return Err(Error::InvalidSpec("step shrink factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// A converged eigenpair. `u` follows the interior order of the domain and is
/// normalized so that `sum nu |u|^p = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenPair {
    pub p: f64,
    pub lambda: f64,
    pub u: Vec<f64>,
    pub residual: f64,
    pub restarts: usize,
    pub restarts_agreeing: usize,
    pub iterations: usize,
    pub certified: bool,
}

impl EigenPair {
    /// Every restart converged to the same normalized vector.
    pub fn restarts_unanimous(&self) -> bool {
        self.restarts_agreeing == self.restarts
    }
}

/// `|t|^(p-2) t`. At `p = 1` this is `sign`, with tiny `t` counted as zero.
/// For `p > 1` it is evaluated as `sign(t) |t|^(p-1)`, which cannot overflow;
/// cutting it off near zero would shift solutions by `ZERO_DIFFERENCE^(p-1)`.
pub fn phi(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        if t.abs() < ZERO_DIFFERENCE {
            0.0
        } else {
            t.signum()
        }
    } else if t == 0.0 {
        0.0
    } else {
        t.signum() * t.abs().powf(p - 1.0)
    }
}

pub(crate) fn check_p(p: f64, strict: bool) -> Result<()> {
    let ok = if strict { p > 1.0 } else { p >= 1.0 };
    if !ok || !p.is_finite() {
        return Err(Error::InvalidP(p));
    }
    Ok(())
}

pub fn apply_p_laplacian(domain: &DirichletDomain, p: f64, u: &[f64]) -> Result<Vec<f64>> {
    check_p(p, false)?;
    domain.check_dimension(u.len())?;
    Ok(p_laplacian(domain, p, u))
}

pub(crate) fn p_laplacian(domain: &DirichletDomain, p: f64, u: &[f64]) -> Vec<f64> {
    let num = domain.numeric();
    let mut out: Vec<f64> = u
        .iter()
        .zip(&num.boundary)
        .map(|(&x, &b)| b * phi(-x, p))
        .collect();
    for &(i, j, w) in &num.edges {
        let flux = w * phi(u[j] - u[i], p);
        out[i] += flux;
        out[j] -= flux;
    }
    for (o, nu) in out.iter_mut().zip(&num.nu) {
        *o /= nu;
    }
    out
}

pub fn dirichlet_energy(domain: &DirichletDomain, p: f64, u: &[f64]) -> Result<f64> {
    check_p(p, false)?;
    domain.check_dimension(u.len())?;
    Ok(energy(domain, p, u))
}

pub(crate) fn energy(domain: &DirichletDomain, p: f64, u: &[f64]) -> f64 {
    let num = domain.numeric();
    let interior: f64 = num
        .edges
        .iter()
        .map(|&(i, j, w)| w * (u[j] - u[i]).abs().powf(p))
        .sum();
    let boundary: f64 = u.iter().zip(&num.boundary).map(|(x, b)| b * x.abs().powf(p)).sum();
    interior + boundary
}

/// `sum nu |u|^p`.
pub fn norm_pow(domain: &DirichletDomain, p: f64, u: &[f64]) -> f64 {
    u.iter()
        .zip(&domain.numeric().nu)
        .map(|(x, nu)| nu * x.abs().powf(p))
        .sum()
}

pub fn rayleigh_quotient(domain: &DirichletDomain, p: f64, u: &[f64]) -> Result<f64> {
    check_p(p, false)?;
    domain.check_dimension(u.len())?;
    let norm = norm_pow(domain, p, u);
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(energy(domain, p, u) / norm)
}

/// Gradient of the energy: `dE/du_x = -p nu_x (Delta_p u)(x)`.
pub fn energy_gradient(domain: &DirichletDomain, p: f64, u: &[f64]) -> Result<Vec<f64>> {
    check_p(p, true)?;
    domain.check_dimension(u.len())?;
    Ok(p_laplacian(domain, p, u)
        .into_iter()
        .zip(&domain.numeric().nu)
        .map(|(l, nu)| -p * nu * l)
        .collect())
}

/// `max_x |Delta_p u(x) + lambda phi(u(x))|`.
pub fn eigen_residual(domain: &DirichletDomain, p: f64, u: &[f64], lambda: f64) -> Result<f64> {
    check_p(p, false)?;
    domain.check_dimension(u.len())?;
    Ok(residual(domain, p, u, lambda))
}

pub(crate) fn residual(domain: &DirichletDomain, p: f64, u: &[f64], lambda: f64) -> f64 {
    p_laplacian(domain, p, u)
        .iter()
        .zip(u)
        .map(|(l, x)| (l + lambda * phi(*x, p)).abs())
        .fold(0.0, f64::max)
}

/// Rescales `u` so that `sum nu |u|^p = 1`.
pub fn normalize(domain: &DirichletDomain, p: f64, u: &[f64]) -> Result<Vec<f64>> {
    domain.check_dimension(u.len())?;
    let norm = norm_pow(domain, p, u);
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let scale = norm.powf(-1.0 / p);
    Ok(u.iter().map(|x| x * scale).collect())
}

/// Negates `u` on the second part of the bipartition.
pub fn involution(domain: &DirichletDomain, parts: &Bipartition, u: &[f64]) -> Result<Vec<f64>> {
    parts.validate(domain)?;
    domain.check_dimension(u.len())?;
    Ok(u.iter()
        .enumerate()
        .map(|(x, v)| if parts.in_part_two(x) { -v } else { *v })
        .collect())
}

/// One row of [`monotonicity_profile`]: `scaled = p * lambda^(1/p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub p: f64,
    pub scaled: f64,
    pub pair: EigenPair,
}

pub fn monotonicity_profile(
    domain: &DirichletDomain,
    ps: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<ProfilePoint>> {
    domain.check_normalized()?;
    ps.iter()
        .map(|&p| {
            let pair = first_eigenpair(domain, p, cfg)?;
            Ok(ProfilePoint {
                p,
                scaled: p * pair.lambda.powf(1.0 / p),
                pair,
            })
        })
        .collect()
}

/// True when the sequence never drops by more than `slack`.
pub fn is_nondecreasing(profile: &[ProfilePoint], slack: f64) -> bool {
    profile.windows(2).all(|w| w[1].scaled >= w[0].scaled - slack)
}

pub(crate) fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
