//! First eigenpair by projected gradient descent on the unit l^p sphere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    check_p, energy, norm_pow, p_laplacian, phi, polish, residual, sup_distance, EigenPair, SolverConfig,
    NEAR_ONE_WARNING,
};
use crate::error::{Error, Result};
use crate::graph::DirichletDomain;

const ARMIJO: f64 = 1e-4;
const AGREEMENT: f64 = 1e-6;
const MIN_STEP: f64 = 1e-14;
const MAX_STEP: f64 = 1e8;
/// Iterations without halving the defect before the descent hands over to
/// the Newton polish.
pub(crate) const STALL: usize = 20_000;

/// Minimizes the Rayleigh quotient. Fails with [`Error::NoConvergence`] when
/// the best restart still violates the residual tolerance.
pub fn first_eigenpair(domain: &DirichletDomain, p: f64, cfg: &SolverConfig) -> Result<EigenPair> {
    let pair = first_eigenpair_best_effort(domain, p, cfg)?;
    if pair.residual > cfg.residual_tol {
        return Err(Error::NoConvergence {
            iterations: pair.iterations,
            residual: pair.residual,
        });
    }
    Ok(pair)
}

/// Same search as [`first_eigenpair`] but returns the best iterate even when
/// the residual tolerance is not met (`certified` is then false).
pub fn first_eigenpair_best_effort(
    domain: &DirichletDomain,
    p: f64,
    cfg: &SolverConfig,
) -> Result<EigenPair> {
    check_p(p, true)?;
    cfg.validate()?;
    if !domain.is_connected() {
        return Err(Error::DisconnectedDomain);
    }
    if p < NEAR_ONE_WARNING {
        log::warn!("p = {p} is close to 1; the first eigenpair solver is ill-conditioned");
    }
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| descend(domain, p, cfg, k))
        .collect();

    // Prefer restarts that met the tolerance, then the lowest quotient.
    let best = runs
        .iter()
        .min_by(|a, b| {
            let ka = a.residual > cfg.residual_tol;
            let kb = b.residual > cfg.residual_tol;
            ka.cmp(&kb).then(a.lambda.total_cmp(&b.lambda))
        })
        .expect("at least one restart");
    let agreeing = runs
        .iter()
        .filter(|r| sup_distance(&r.u, &best.u) <= AGREEMENT)
        .count();
    let positive = best.u.iter().all(|&x| x > 0.0);
    Ok(EigenPair {
        p,
        lambda: best.lambda,
        u: best.u.clone(),
        residual: best.residual,
        restarts: cfg.restarts,
        restarts_agreeing: agreeing,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        certified: positive && best.residual <= cfg.residual_tol,
    })
}

struct Run {
    u: Vec<f64>,
    lambda: f64,
    residual: f64,
    iterations: usize,
}

pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (restart as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn rescale(domain: &DirichletDomain, p: f64, u: &mut [f64]) {
    let scale = norm_pow(domain, p, u).powf(-1.0 / p);
    u.iter_mut().for_each(|x| *x *= scale);
}

/// Preconditioned descent direction `Delta_p u + R phi(u)`, which is also the
/// eigen-equation defect at the normalized iterate.
fn direction(domain: &DirichletDomain, p: f64, u: &[f64], quotient: f64) -> Vec<f64> {
    p_laplacian(domain, p, u)
        .into_iter()
        .zip(u)
        .map(|(l, x)| l + quotient * phi(*x, p))
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, d| m.max(d.abs()))
}

fn descend(domain: &DirichletDomain, p: f64, cfg: &SolverConfig, restart: usize) -> Run {
    let nu = &domain.numeric().nu;
    let mut rng = restart_rng(cfg.rng_seed, restart);
    let mut u: Vec<f64> = (0..domain.len())
        .map(|_| 1.0 + 0.2 * rng.gen_range(-1.0..1.0))
        .collect();
    rescale(domain, p, &mut u);
    let mut quotient = energy(domain, p, &u);
    let mut dir = direction(domain, p, &u, quotient);
    let mut step = 1.0;
    let mut best = (quotient, u.clone());
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut mark = (f64::INFINITY, 0);

    while iterations < cfg.max_iterations {
        let defect = max_abs(&dir);
        if defect <= 0.1 * cfg.residual_tol {
            break;
        }
        if defect < 0.5 * mark.0 {
            mark = (defect, iterations);
        } else if iterations - mark.1 > STALL {
            break;
        }
        iterations += 1;

        // Barzilai-Borwein trial step in the nu-weighted inner product.
        if let Some((u_prev, dir_prev)) = &previous {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for x in 0..u.len() {
                let s = u[x] - u_prev[x];
                let y = dir_prev[x] - dir[x];
                ss += nu[x] * s * s;
                sy += nu[x] * s * y;
            }
            if sy > 0.0 && ss > 0.0 {
                step = (ss / sy).clamp(MIN_STEP, MAX_STEP);
            }
        }

        // Slope of the quotient along `dir` (per unit step, up to the factor p).
        let slope: f64 = dir.iter().zip(nu).map(|(d, w)| w * d * d).sum::<f64>() * p;
        let floor = 4.0 * f64::EPSILON * quotient.abs();
        let mut accepted = false;
        let mut trial_step = step;
        while trial_step >= MIN_STEP {
            let mut candidate: Vec<f64> = u.iter().zip(&dir).map(|(x, d)| x + trial_step * d).collect();
            let norm = norm_pow(domain, p, &candidate);
            if norm.is_finite() && norm > 0.0 {
                let scale = norm.powf(-1.0 / p);
                candidate.iter_mut().for_each(|x| *x *= scale);
                let q = energy(domain, p, &candidate);
                let predicted = ARMIJO * trial_step * slope;
                // Once the predicted decrease drops below roundoff in the
                // quotient, only the defect can still tell progress apart.
                let progress = if predicted > floor {
                    q <= quotient - predicted + floor
                } else {
                    q <= quotient + floor && max_abs(&direction(domain, p, &candidate, q)) < defect
                };
                if progress {
                    previous = Some((std::mem::replace(&mut u, candidate), dir.clone()));
                    quotient = q;
                    accepted = true;
                    break;
                }
            }
            trial_step *= cfg.step_shrink;
        }
        if !accepted {
            break;
        }
        step = trial_step;
        dir = direction(domain, p, &u, quotient);
        if quotient < best.0 {
            best = (quotient, u.clone());
        }
    }

    // The last iterate is usually the best; fall back to the best quotient seen.
    let mut final_u = if quotient <= best.0 { u } else { best.1 };
    let mut lambda = energy(domain, p, &final_u);
    if let Some((v, lam)) = polish(domain, p, &final_u, lambda) {
        // Newton may land on another eigenpair; only the first one is signed.
        let sign = if v.iter().zip(nu).map(|(x, w)| w * x).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        if v.iter().all(|x| sign * x > 0.0) {
            final_u = v.into_iter().map(|x| sign * x).collect();
            lambda = lam;
        }
    }
    if final_u.iter().zip(nu).map(|(x, w)| w * x).sum::<f64>() < 0.0 {
        final_u.iter_mut().for_each(|x| *x = -*x);
    }
    Run {
        residual: residual(domain, p, &final_u, lambda),
        u: final_u,
        lambda,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    #[test]
    fn singleton_eigenvalue_is_boundary_over_measure() {
        let d = fixtures::singleton(int(3), int(2));
        for p in [1.5, 2.0, 4.0] {
            let pair = first_eigenpair(&d, p, &SolverConfig::default()).unwrap();
            assert!((pair.lambda - 2.0 / 3.0).abs() < 1e-12);
            assert!((pair.u[0] - 3f64.powf(-1.0 / p)).abs() < 1e-12);
            assert!(pair.certified);
        }
    }

    #[test]
    fn path_first_eigenpair_at_p2() {
        // Dirichlet Laplacian of the 3-path with nu = (2, 2, 2): lambda = (2 - sqrt 2) / 2.
        let d = fixtures::path5_domain();
        let pair = first_eigenpair(&d, 2.0, &SolverConfig::default()).unwrap();
        assert!((pair.lambda - (2.0 - 2f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((pair.u[1] / pair.u[0] - 2f64.sqrt()).abs() < 1e-8);
        assert_eq!(pair.restarts_agreeing, pair.restarts);
    }

    #[test]
    fn rejects_invalid_requests() {
        let d = fixtures::path5_domain();
        let cfg = SolverConfig::default();
        assert_eq!(first_eigenpair(&d, 1.0, &cfg), Err(Error::InvalidP(1.0)));
        let split = crate::graph::DirichletDomain::build(&fixtures::path5(), &["v1", "v3"]).unwrap();
        assert_eq!(first_eigenpair(&split, 2.0, &cfg), Err(Error::DisconnectedDomain));
    }

    #[test]
    fn exhausted_iterations_report_no_convergence() {
        let d = fixtures::pendant_triangle_domain();
        let cfg = SolverConfig {
            max_iterations: 2,
            residual_tol: 1e-300,
            ..SolverConfig::default()
        };
        let bounded = crate::graph::DirichletDomain::new(
            d.ids().to_vec(),
            (0..d.len()).map(|i| d.nu(i).clone()).collect(),
            d.edges().map(|(i, j, w)| (i, j, w.clone())).collect(),
            vec![ratio(1, 7), int(0), int(0), int(0), int(1)],
        )
        .unwrap();
        assert!(matches!(
            first_eigenpair(&bounded, 3.0, &cfg),
            Err(Error::NoConvergence { .. })
        ));
    }
}
