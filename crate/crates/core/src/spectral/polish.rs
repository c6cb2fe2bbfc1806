//! Mixed-precision Newton refinement of a descent iterate.
//!
//! Gradient methods stall once the quotient is flat to machine precision and
//! crawl for `p` near 1, where eigenfunctions have near plateaus. For `p > 2`
//! the defect near equal neighbours is of order `|du|^(p-1)`, so in plain
//! `f64` it drowns in the rounding of the cancelling diagonal terms long
//! before `u` is pinned down. The defect is therefore evaluated in
//! double-double; corrections are solved in `f64`.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use qd::Quad;

use super::{energy, residual, ZERO_DIFFERENCE};
use crate::graph::DirichletDomain;
use crate::rational::{to_f64, Rational};

/// Largest system handed to the dense solve.
const LIMIT: usize = 400;
const STEPS: usize = 100;
const MIN_DAMPING: f64 = 1e-6;

type Dd = Quad;

fn dd(x: f64) -> Dd {
    Quad::from_f64(x)
}

fn hi(x: Dd) -> f64 {
    x.0
}

/// `|x|^a` for double-double `x`.
fn dd_pow(x: Dd, a: f64) -> Dd {
    let x = x.abs();
    if x.0 == 0.0 {
        return x;
    }
    (x.ln() * dd(a)).exp()
}

/// Exact to double-double when numerator and denominator fit in 53 bits.
fn dd_rational(q: &Rational) -> Dd {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(a), Some(b)) if a.unsigned_abs() < 1 << 53 && b < 1 << 53 => dd(a as f64) / dd(b as f64),
        _ => dd(to_f64(q)),
    }
}

fn dd_phi(t: Dd, p: f64) -> Dd {
    if t.0 == 0.0 {
        return t;
    }
    let mag = dd_pow(t, p - 1.0);
    if t.0 < 0.0 {
        -mag
    } else {
        mag
    }
}

struct System {
    p: f64,
    nu: Vec<Dd>,
    boundary: Vec<Dd>,
    edges: Vec<(usize, usize, Dd)>,
}

impl System {
    fn new(domain: &DirichletDomain, p: f64) -> Self {
        Self {
            p,
            nu: (0..domain.len()).map(|x| dd_rational(domain.nu(x))).collect(),
            boundary: domain.boundary_weights().iter().map(dd_rational).collect(),
            edges: domain.edges().map(|(i, j, w)| (i, j, dd_rational(w))).collect(),
        }
    }

    fn norm_pow(&self, v: &[Dd]) -> Dd {
        v.iter()
            .zip(&self.nu)
            .fold(dd(0.0), |acc, (x, w)| acc + *w * dd_pow(*x, self.p))
    }

    fn energy(&self, v: &[Dd]) -> Dd {
        let interior = self
            .edges
            .iter()
            .fold(dd(0.0), |acc, &(i, j, w)| acc + w * dd_pow(v[j] - v[i], self.p));
        v.iter()
            .zip(&self.boundary)
            .fold(interior, |acc, (x, b)| acc + *b * dd_pow(*x, self.p))
    }

    /// Negated `nu Delta_p v + lam nu phi(v)`, rounded to `f64` after the
    /// cancellations have happened.
    fn defect(&self, v: &[Dd], lam: Dd) -> DVector<f64> {
        let mut out: Vec<Dd> = (0..v.len())
            .map(|x| -((self.nu[x] * lam - self.boundary[x]) * dd_phi(v[x], self.p)))
            .collect();
        for &(i, j, w) in &self.edges {
            let flux = w * dd_phi(v[j] - v[i], self.p);
            out[i] -= flux;
            out[j] += flux;
        }
        DVector::from_iterator(v.len(), out.into_iter().map(hi))
    }

    /// Unit-norm rescaling, its quotient and the defect there.
    fn settle(&self, v: &[Dd]) -> Option<(Vec<Dd>, Dd, DVector<f64>)> {
        let norm = self.norm_pow(v);
        if !(norm.0 > 0.0 && norm.0.is_finite()) {
            return None;
        }
        let scale = dd_pow(norm, -1.0 / self.p);
        let w: Vec<Dd> = v.iter().map(|x| *x * scale).collect();
        let q = self.energy(&w);
        let defect = self.defect(&w, q);
        Some((w, q, defect))
    }

    /// Jacobian in the cluster unknowns plus the eigenvalue. Edges inside a
    /// cluster carry no flux and are left out.
    fn jacobian(&self, v: &[f64], lam: f64, plateaus: &Plateaus) -> DMatrix<f64> {
        let p = self.p;
        let n = v.len();
        let c = plateaus.count;
        let of = &plateaus.of;
        let dphi = |t: f64| (p - 1.0) * t.abs().max(ZERO_DIFFERENCE).powf(p - 2.0);
        let phi = |t: f64| t.signum() * t.abs().powf(p - 1.0);
        let mut jac = DMatrix::<f64>::zeros(n + 1, c + 1);
        for x in 0..n {
            let nu = hi(self.nu[x]);
            jac[(x, of[x])] += (nu * lam - hi(self.boundary[x])) * dphi(v[x]);
            jac[(x, c)] = nu * phi(v[x]);
            jac[(n, of[x])] += p * nu * phi(v[x]);
        }
        for &(i, j, w) in &self.edges {
            if of[i] == of[j] {
                continue;
            }
            let d = hi(w) * dphi(v[j] - v[i]);
            jac[(i, of[j])] += d;
            jac[(i, of[i])] -= d;
            jac[(j, of[i])] += d;
            jac[(j, of[j])] -= d;
        }
        jac
    }
}

/// Vertices forced to share one value: connected components of the edges
/// whose endpoints differ by at most the threshold.
struct Plateaus {
    of: Vec<usize>,
    count: usize,
}

impl Plateaus {
    fn new(domain: &DirichletDomain, u: &[f64], threshold: Option<f64>) -> Self {
        let n = u.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        if let Some(threshold) = threshold {
            for (i, j, _) in domain.edges() {
                if (u[i] - u[j]).abs() <= threshold {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut of = vec![0; n];
        let mut count = 0;
        for (x, slot) in of.iter_mut().enumerate() {
            let r = root(&mut parent, x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            *slot = label[r];
        }
        Self { of, count }
    }

    /// Cluster values from a full vector (first member wins).
    fn compress(&self, v: &[Dd]) -> Vec<Dd> {
        let mut out = vec![dd(0.0); self.count];
        for (x, &c) in self.of.iter().enumerate().rev() {
            out[c] = v[x];
        }
        out
    }

    fn expand(&self, w: &[Dd]) -> Vec<Dd> {
        self.of.iter().map(|&c| w[c]).collect()
    }
}

/// Damped Newton on the eigen-equation with the normalization as extra row.
/// Iterates are kept on the unit sphere with the quotient as eigenvalue, and
/// iteration stops on the step size rather than the residual.
///
/// For `p < 2` the defect is only Holder in `u` near equal neighbours, so a
/// one-ulp split of a symmetric pair already costs about `ulp^(p-1)`. Runs
/// with near-equal neighbours merged into plateaus are tried as well and the
/// smallest `f64` residual wins. Returns `None` when nothing beats the start.
pub(crate) fn polish(domain: &DirichletDomain, p: f64, u: &[f64], lambda: f64) -> Option<(Vec<f64>, f64)> {
    if u.len() > LIMIT {
        return None;
    }
    let system = System::new(domain, p);
    let start = residual(domain, p, u, lambda);
    let floor = 16.0 * f64::EPSILON * lambda.abs().max(1.0);
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let consider = |best: &mut Option<(Vec<f64>, f64, f64)>, out: Vec<f64>| {
        let q = energy(domain, p, &out);
        let res = residual(domain, p, &out, q);
        if res <= start.max(floor) && best.as_ref().is_none_or(|b| res < b.2) {
            *best = Some((out, q, res));
        }
    };
    // Plateaus are read off the pointwise refinement, which sits much closer
    // to the solution than the descent iterate.
    let pointwise = refine(&system, u, &Plateaus::new(domain, u, None));
    let base = pointwise.clone().unwrap_or_else(|| u.to_vec());
    if let Some(out) = pointwise {
        consider(&mut best, out);
    }
    if best.as_ref().is_some_and(|b| b.2 <= floor) {
        return best.map(|(out, q, _)| (out, q));
    }
    let top = base.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut seen = Vec::new();
    for threshold in [0.0, 1e-12, 1e-9, 1e-6] {
        let plateaus = Plateaus::new(domain, &base, Some(threshold * top));
        if plateaus.count == base.len() || seen.contains(&plateaus.of) {
            continue;
        }
        seen.push(plateaus.of.clone());
        if let Some(out) = refine(&system, &base, &plateaus) {
            consider(&mut best, out);
        }
    }
    best.map(|(out, q, _)| (out, q))
}

fn refine(system: &System, u: &[f64], plateaus: &Plateaus) -> Option<Vec<f64>> {
    let n = u.len();
    let c = plateaus.count;
    let settle = |w: &[Dd]| {
        system
            .settle(&plateaus.expand(w))
            .map(|(v, lam, rhs)| (plateaus.compress(&v), lam, rhs))
    };
    let start: Vec<Dd> = plateaus.compress(&u.iter().map(|x| dd(*x)).collect::<Vec<_>>());
    let (mut w, mut lam, mut rhs) = settle(&start)?;
    for _ in 0..STEPS {
        let v: Vec<f64> = plateaus.expand(&w).iter().map(|x| hi(*x)).collect();
        let jac = system.jacobian(&v, hi(lam), plateaus);
        let full = rhs.clone().insert_row(n, 0.0);
        let delta = if c == n {
            jac.lu().solve(&full)?
        } else {
            jac.svd(true, true).solve(&full, 1e-14).ok()?
        };
        let merit = rhs.norm();
        let mut t = 1.0;
        let mut moved = None;
        while t >= MIN_DAMPING {
            let trial: Vec<Dd> = w.iter().enumerate().map(|(x, a)| *a + dd(t * delta[x])).collect();
            if let Some(next) = settle(&trial) {
                if next.2.norm() < (1.0 - 1e-4 * t) * merit {
                    moved = Some(next);
                    break;
                }
            }
            t *= 0.5;
        }
        let Some(next) = moved else { break };
        (w, lam, rhs) = next;
        let size = (0..c).map(|x| (t * delta[x]).abs()).fold(0.0, f64::max);
        let top = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if size <= 1e-15 * top {
            break;
        }
    }
    Some(plateaus.expand(&w).iter().map(|x| hi(*x)).collect())
}
