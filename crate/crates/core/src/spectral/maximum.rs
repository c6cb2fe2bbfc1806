//! Maximum eigenpair on bipartite domains.
//!
//! With `h = g^(1/p)` and signs alternating across the bipartition, the
//! energy of the alternating function becomes the concave objective
//! `Q(g) = sum_edges mu (h_i + h_j)^p + sum_i b_i g_i` on the affine simplex
//! `{g > 0, sum nu g = 1}`, so any interior critical point is the maximum.

use rand::Rng;
use rayon::prelude::*;

use super::first::{restart_rng, STALL};
use super::{check_p, polish, residual, sup_distance, EigenPair, SolverConfig, NEAR_ONE_WARNING};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, DirichletDomain};

const ARMIJO: f64 = 1e-4;
const AGREEMENT: f64 = 1e-6;
const FLOOR: f64 = 1e-14;
const MIN_STEP: f64 = 1e-16;

pub fn reformulated_objective(domain: &DirichletDomain, p: f64, g: &[f64]) -> Result<f64> {
    check_p(p, true)?;
    domain.check_dimension(g.len())?;
    Ok(objective(domain, p, g))
}

/// Partial derivatives of [`reformulated_objective`].
pub fn reformulated_gradient(domain: &DirichletDomain, p: f64, g: &[f64]) -> Result<Vec<f64>> {
    check_p(p, true)?;
    domain.check_dimension(g.len())?;
    if g.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidSpec("gradient requires a strictly positive point".into()));
    }
    Ok(gradient(domain, p, g))
}

fn objective(domain: &DirichletDomain, p: f64, g: &[f64]) -> f64 {
    let num = domain.numeric();
    let h: Vec<f64> = g.iter().map(|x| x.max(0.0).powf(1.0 / p)).collect();
    let edges: f64 = num
        .edges
        .iter()
        .map(|&(i, j, w)| w * (h[i] + h[j]).powf(p))
        .sum();
    edges + g.iter().zip(&num.boundary).map(|(x, b)| b * x).sum::<f64>()
}

fn gradient(domain: &DirichletDomain, p: f64, g: &[f64]) -> Vec<f64> {
    let num = domain.numeric();
    let h: Vec<f64> = g.iter().map(|x| x.powf(1.0 / p)).collect();
    let mut out = num.boundary.clone();
    for &(i, j, w) in &num.edges {
        let s = w * (h[i] + h[j]).powf(p - 1.0);
        out[i] += s * h[i].powf(1.0 - p);
        out[j] += s * h[j].powf(1.0 - p);
    }
    out
}

pub fn max_eigenpair_bipartite(
    domain: &DirichletDomain,
    p: f64,
    cfg: &SolverConfig,
) -> Result<EigenPair> {
    check_p(p, true)?;
    cfg.validate()?;
    let parts = domain.bipartition()?.ok_or(Error::NotBipartite)?;
    if p < NEAR_ONE_WARNING {
        log::warn!("p = {p} is close to 1; the maximum eigenpair solver is ill-conditioned");
    }
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| ascend(domain, p, cfg, k))
        .collect();
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let polished: Vec<(Vec<f64>, f64, f64)> = runs
        .par_iter()
        .map(|run| {
            let mut u = alternate(&parts, &run.g, p);
            let mut lambda = run.value;
            if let Some((v, lam)) = polish(domain, p, &u, lambda) {
                // Keep the result only if it still alternates like the iterate.
                let sign = if v[0] * u[0] < 0.0 { -1.0 } else { 1.0 };
                if v.iter().zip(&u).all(|(a, b)| sign * a * b > 0.0) {
                    u = v.into_iter().map(|x| sign * x).collect();
                    lambda = lam;
                }
            }
            let res = residual(domain, p, &u, lambda);
            (u, lambda, res)
        })
        .collect();
    let (u, lambda, res) = polished
        .iter()
        .max_by(|a, b| {
            let ka = a.2 <= cfg.residual_tol;
            let kb = b.2 <= cfg.residual_tol;
            ka.cmp(&kb).then(a.1.total_cmp(&b.1))
        })
        .cloned()
        .expect("at least one restart");
    if res > cfg.residual_tol {
        return Err(Error::NoConvergence { iterations, residual: res });
    }
    let agreeing = polished
        .iter()
        .filter(|r| sup_distance(&r.0, &u) <= AGREEMENT)
        .count();
    let alternating = u.iter().all(|&x| x != 0.0)
        && domain.edges().all(|(i, j, _)| u[i] * u[j] < 0.0);
    Ok(EigenPair {
        p,
        lambda,
        u,
        residual: res,
        restarts: cfg.restarts,
        restarts_agreeing: agreeing,
        iterations,
        certified: alternating,
    })
}

/// `u = S^{-1}(g^(1/p))`: positive on the part containing the first vertex.
fn alternate(parts: &Bipartition, g: &[f64], p: f64) -> Vec<f64> {
    g.iter()
        .enumerate()
        .map(|(x, v)| {
            let h = v.powf(1.0 / p);
            if parts.in_part_two(x) {
                -h
            } else {
                h
            }
        })
        .collect()
}

struct Run {
    g: Vec<f64>,
    value: f64,
    iterations: usize,
}

/// Keeps `g` in the affine simplex after a step: clip, then shift along `nu`.
fn project(g: &mut [f64], nu: &[f64], nu_sq: f64) {
    for _ in 0..4 {
        g.iter_mut().for_each(|x| *x = x.max(FLOOR));
        let excess = g.iter().zip(nu).map(|(x, w)| x * w).sum::<f64>() - 1.0;
        if excess.abs() < 1e-15 {
            break;
        }
        g.iter_mut().zip(nu).for_each(|(x, w)| *x -= excess / nu_sq * w);
    }
}

/// Ascent direction `g_i (q_i / nu_i - Q)`; its nu-weighted sum vanishes by
/// Euler's identity, so steps stay on the affine constraint.
fn direction(domain: &DirichletDomain, p: f64, g: &[f64], value: f64) -> (Vec<f64>, f64) {
    let nu = &domain.numeric().nu;
    let grad = gradient(domain, p, g);
    let mut defect = 0.0f64;
    let dir = g
        .iter()
        .zip(grad.iter().zip(nu))
        .map(|(x, (q, w))| {
            let gap = q / w - value;
            defect = defect.max(x.powf((p - 1.0) / p) * gap.abs());
            x * gap
        })
        .collect();
    (dir, defect)
}

fn ascend(domain: &DirichletDomain, p: f64, cfg: &SolverConfig, restart: usize) -> Run {
    let nu = domain.numeric().nu.clone();
    let nu_sq: f64 = nu.iter().map(|w| w * w).sum();
    let mut rng = restart_rng(cfg.rng_seed ^ 0x6d61_7869, restart);
    let mut g: Vec<f64> = (0..domain.len())
        .map(|_| 1.0 + 0.2 * rng.gen_range(-1.0..1.0))
        .collect();
    let total: f64 = g.iter().zip(&nu).map(|(x, w)| x * w).sum();
    g.iter_mut().for_each(|x| *x /= total);

    let mut value = objective(domain, p, &g);
    let (mut dir, mut defect) = direction(domain, p, &g, value);
    let mut step = 1.0;
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut mark = (f64::INFINITY, 0);

    while iterations < cfg.max_iterations && defect > 0.1 * cfg.residual_tol {
        if defect < 0.5 * mark.0 {
            mark = (defect, iterations);
        } else if iterations - mark.1 > STALL {
            break;
        }
        iterations += 1;
        if let Some((g_prev, dir_prev)) = &previous {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for x in 0..g.len() {
                let s = g[x] - g_prev[x];
                let y = dir_prev[x] - dir[x];
                ss += nu[x] * s * s / g[x];
                sy += nu[x] * s * y / g[x];
            }
            if sy > 0.0 && ss > 0.0 {
                step = ss / sy;
            }
        }
        // Stay strictly inside the positive orthant.
        let boundary_step = g
            .iter()
            .zip(&dir)
            .filter(|(_, d)| **d < 0.0)
            .map(|(x, d)| -x / d)
            .fold(f64::INFINITY, f64::min);
        step = step.min(0.99 * boundary_step);

        let slope: f64 = dir
            .iter()
            .zip(gradient(domain, p, &g))
            .map(|(d, q)| d * q)
            .sum();
        let floor = 4.0 * f64::EPSILON * value.abs();
        let mut accepted = false;
        while step >= MIN_STEP {
            let mut candidate: Vec<f64> = g.iter().zip(&dir).map(|(x, d)| x + step * d).collect();
            project(&mut candidate, &nu, nu_sq);
            let q = objective(domain, p, &candidate);
            let predicted = ARMIJO * step * slope;
            // Below roundoff in the objective, accept steps that shrink the defect.
            let progress = if predicted > floor {
                q >= value + predicted - floor
            } else {
                q >= value - floor && direction(domain, p, &candidate, q).1 < defect
            };
            if progress {
                previous = Some((std::mem::replace(&mut g, candidate), dir.clone()));
                value = q;
                accepted = true;
                break;
            }
            step *= cfg.step_shrink;
        }
        if !accepted {
            break;
        }
        (dir, defect) = direction(domain, p, &g, value);
    }
    Run {
        g,
        value,
        iterations,
    }
}
