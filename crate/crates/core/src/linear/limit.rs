//! Limit estimates for sequences known only on a finite prefix.
//!
//! Decisions, in order: a flat tail converges to its last value; a tail with
//! a stable positive log-log slope diverges and one with a stable negative
//! slope converges to zero; a large increasing tail diverges; otherwise
//! polynomial extrapolation in `1/r` converges when two degrees agree.

use serde::Serialize;

/// Relative spread below which a tail counts as settled.
pub const SPREAD_TOLERANCE: f64 = 1e-9;

/// An increasing tail ending above this value diverges.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

/// Agreement required between the two extrapolation degrees.
pub const EXTRAPOLATION_TOLERANCE: f64 = 1e-8;

/// Minimal |slope| in log-log coordinates for the power-law rules.
const MIN_EXPONENT: f64 = 0.1;

const NODES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitStatus {
    Converged,
    DivergesToInfinity,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitMethod {
    Spread,
    PowerLaw,
    Threshold,
    Extrapolation,
    None,
}

/// Which sequence a limit was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceSource {
    Direct,
    StolzCesaro,
    BallRatios,
    Annuli,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LimitEstimate {
    pub value: Option<f64>,
    pub status: LimitStatus,
    pub method: LimitMethod,
    /// First and last index of the tail window.
    pub window: (usize, usize),
    pub tail_values: Vec<f64>,
    /// Spread or extrapolation disagreement behind a `Converged` verdict.
    pub error_estimate: Option<f64>,
    pub source: SequenceSource,
}

impl LimitEstimate {
    pub fn converged(&self) -> Option<f64> {
        match self.status {
            LimitStatus::Converged => self.value,
            _ => None,
        }
    }

    pub fn diverges(&self) -> bool {
        self.status == LimitStatus::DivergesToInfinity
    }

    pub fn is_conclusive(&self) -> bool {
        self.status != LimitStatus::Inconclusive
    }

    pub(crate) fn inconclusive(window: (usize, usize), tail_values: Vec<f64>) -> Self {
        Self {
            value: None,
            status: LimitStatus::Inconclusive,
            method: LimitMethod::None,
            window,
            tail_values,
            error_estimate: None,
            source: SequenceSource::Direct,
        }
    }

    pub(crate) fn with_source(mut self, source: SequenceSource) -> Self {
        self.source = source;
        self
    }
}

/// `values[i]` is the term with index `first_index + i`.
pub fn estimate_limit(values: &[f64], first_index: usize) -> LimitEstimate {
    let n = values.len();
    let last_index = first_index + n.saturating_sub(1);
    let width = (n / 4).max(4).min(n);
    let window = &values[n - width..];
    let window_range = (last_index + 1 - width, last_index);
    let tail_values = values[n.saturating_sub(5)..].to_vec();
    if n < 4 || window.iter().any(|v| !v.is_finite()) {
        return LimitEstimate::inconclusive(window_range, tail_values);
    }
    let verdict = |value: Option<f64>, status, method, error_estimate| LimitEstimate {
        value,
        status,
        method,
        window: window_range,
        tail_values: tail_values.clone(),
        error_estimate,
        source: SequenceSource::Direct,
    };
    let last = values[n - 1];

    let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= SPREAD_TOLERANCE * lo.abs().max(hi.abs()) {
        return verdict(Some(last), LimitStatus::Converged, LimitMethod::Spread, Some(hi - lo));
    }

    let increasing = window.windows(2).all(|w| w[1] > w[0]);
    let decreasing = window.windows(2).all(|w| w[1] < w[0]);
    let at = |r: usize| values[r - first_index];
    if last_index >= 16 && last_index / 2 >= first_index.max(1) {
        let (r0, r1, r2) = (last_index / 2, 3 * last_index / 4, last_index);
        let (v0, v1, v2) = (at(r0), at(r1), at(r2));
        if v0 > 0.0 && v1 > 0.0 && v2 > 0.0 && window.iter().all(|&v| v > 0.0) {
            let slope = |ra: usize, va: f64, rb: usize, vb: f64| (vb / va).ln() / (rb as f64 / ra as f64).ln();
            let early = slope(r0, v0, r1, v1);
            let late = slope(r1, v1, r2, v2);
            let stable = (late - early).abs() <= 0.1 * late.abs() + 1e-3;
            if stable && late >= MIN_EXPONENT && increasing {
                return verdict(None, LimitStatus::DivergesToInfinity, LimitMethod::PowerLaw, None);
            }
            if stable && late <= -MIN_EXPONENT && decreasing {
                return verdict(Some(0.0), LimitStatus::Converged, LimitMethod::PowerLaw, Some(last));
            }
        }
    }
    if increasing && last > DIVERGENCE_THRESHOLD {
        return verdict(None, LimitStatus::DivergesToInfinity, LimitMethod::Threshold, None);
    }

    if let Some((value, disagreement)) = extrapolate(values, first_index) {
        if disagreement <= EXTRAPOLATION_TOLERANCE * value.abs().max(1.0) {
            return verdict(
                Some(value),
                LimitStatus::Converged,
                LimitMethod::Extrapolation,
                Some(disagreement),
            );
        }
    }
    LimitEstimate::inconclusive(window_range, tail_values)
}

/// Neville's scheme evaluated at `x = 0`.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Polynomial extrapolation in `1/r` to `r = infinity` over two node spreads;
/// returns the estimate whose two degrees agree best, with that disagreement.
fn extrapolate(values: &[f64], first_index: usize) -> Option<(f64, f64)> {
    let last = first_index + values.len() - 1;
    [4usize, 2]
        .iter()
        .filter_map(|&divisor| {
            let start = (last / divisor).max(first_index).max(1);
            if last < start + 2 * NODES {
                return None;
            }
            let mut rs: Vec<usize> = (0..NODES)
                .map(|k| start + ((last - start) as f64 * k as f64 / (NODES - 1) as f64).round() as usize)
                .collect();
            rs.dedup();
            if rs.len() < NODES {
                return None;
            }
            // Scaled abscissae last/r lie in [1, divisor].
            let xs: Vec<f64> = rs.iter().map(|&r| last as f64 / r as f64).collect();
            let ys: Vec<f64> = rs.iter().map(|&r| values[r - first_index]).collect();
            let high = neville_at_zero(&xs, &ys);
            let low = neville_at_zero(&xs[1..], &ys[1..]);
            Some((high, (high - low).abs()))
        })
        .filter(|(v, d)| v.is_finite() && d.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(f: impl Fn(f64) -> f64, from: usize, to: usize) -> Vec<f64> {
        (from..=to).map(|r| f(r as f64)).collect()
    }

    #[test]
    fn constant_tail_converges() {
        let e = estimate_limit(&seq(|_| 2.0, 1, 200), 1);
        assert_eq!(e.status, LimitStatus::Converged);
        assert_eq!(e.method, LimitMethod::Spread);
        assert_eq!(e.value, Some(2.0));
        assert_eq!(e.window, (151, 200));
    }

    #[test]
    fn rational_tail_is_extrapolated() {
        let e = estimate_limit(&seq(|r| r / (r + 2.0), 1, 40), 1);
        assert_eq!(e.status, LimitStatus::Converged);
        assert!((e.value.unwrap() - 1.0).abs() < 1e-6, "{e:?}");
        let e = estimate_limit(&seq(|r| 3.0 + 1.0 / r - 2.0 / (r * r), 1, 200), 1);
        assert!((e.value.unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_growth_diverges() {
        let e = estimate_limit(&seq(|r| 4.0 * r + 4.0, 1, 200), 1);
        assert_eq!(e.status, LimitStatus::DivergesToInfinity);
        let e = estimate_limit(&seq(|r| 3.0 * r.sqrt(), 1, 200), 1);
        assert_eq!(e.status, LimitStatus::DivergesToInfinity);
    }

    #[test]
    fn power_decay_converges_to_zero() {
        let e = estimate_limit(&seq(|r| 1.0 / (2.0 * r + 4.0).sqrt(), 0, 200), 0);
        assert_eq!(e.status, LimitStatus::Converged);
        assert_eq!(e.value, Some(0.0));
    }

    #[test]
    fn oscillation_is_inconclusive() {
        let e = estimate_limit(&seq(|r| (r * 0.7).sin(), 1, 200), 1);
        assert_eq!(e.status, LimitStatus::Inconclusive);
        assert!(estimate_limit(&[1.0, 2.0], 0).value.is_none());
    }
}
