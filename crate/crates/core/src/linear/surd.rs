//! Exact values of the form `c * sqrt(n)` and sums of two such terms, ordered
//! by repeated squaring so that no rounding enters a comparison.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};

/// `coeff * sqrt(radicand)` with a positive integer radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: Rational,
    radicand: BigInt,
}

impl Surd {
    pub fn new(coeff: Rational, radicand: BigInt) -> Result<Self> {
        if !radicand.is_positive() {
            return Err(Error::InvalidSpec(format!("radicand {radicand} must be positive")));
        }
        let mut s = Self { coeff, radicand };
        s.absorb_square();
        Ok(s)
    }

    pub fn rational(q: Rational) -> Self {
        Self {
            coeff: q,
            radicand: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// `numerator / sqrt(denominator)` for a positive rational `denominator`.
    pub fn over_sqrt(numerator: Rational, denominator: &Rational) -> Result<Self> {
        if !denominator.is_positive() {
            return Err(Error::InvalidSpec("square root of a nonpositive value".into()));
        }
        // n / sqrt(a/b) = (n / a) * sqrt(a b)
        let radicand = denominator.numer() * denominator.denom();
        Self::new(numerator / Rational::from_integer(denominator.numer().clone()), radicand)
    }

    fn absorb_square(&mut self) {
        // Small square factors first, so common radicands print canonically.
        let mut k = 2u32;
        while k <= 1000 && BigInt::from(k * k) <= self.radicand {
            let square = BigInt::from(k * k);
            while (&self.radicand % &square).is_zero() {
                self.radicand /= &square;
                self.coeff *= Rational::from_integer(BigInt::from(k));
            }
            k += 1;
        }
        let root = self.radicand.sqrt();
        if &root * &root == self.radicand {
            self.coeff *= Rational::from_integer(root);
            self.radicand = BigInt::one();
        }
        if self.coeff.is_zero() {
            self.radicand = BigInt::one();
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.coeff)
    }

    /// Exact square, keeping the sign separately.
    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * Rational::from_integer(self.radicand.clone())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut s = Self {
            coeff: &self.coeff * q,
            radicand: self.radicand.clone(),
        };
        s.absorb_square();
        s
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return to_f64(&self.coeff);
        }
        // Squaring first keeps huge radicands with tiny coefficients in range.
        let sign = if self.coeff.is_negative() { -1.0 } else { 1.0 };
        sign * to_f64(&self.square()).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", format_rational(&self.coeff))
        } else if self.coeff.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", format_rational(&self.coeff), self.radicand)
        }
    }
}

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `r + a sqrt(s)` for `s >= 0`.
fn sign2(r: &Rational, a: &Rational, s: &Rational) -> i8 {
    let (sr, sa) = (sign(r), if s.is_zero() { 0 } else { sign(a) });
    if sa == 0 || sr == sa {
        return if sr == 0 { sa } else { sr };
    }
    if sr == 0 {
        return sa;
    }
    // Opposite signs: the larger magnitude wins.
    match (r * r).cmp(&(a * a * s)) {
        Ordering::Greater => sr,
        Ordering::Less => sa,
        Ordering::Equal => 0,
    }
}

/// Sign of `r + a sqrt(s) + b sqrt(t)` for `s, t >= 0`.
fn sign3(r: &Rational, a: &Rational, s: &Rational, b: &Rational, t: &Rational) -> i8 {
    let sx = sign2(r, a, s);
    let sy = if t.is_zero() { 0 } else { sign(b) };
    if sy == 0 || sx == sy {
        return if sx == 0 { sy } else { sx };
    }
    if sx == 0 {
        return sy;
    }
    // |X|^2 - |Y|^2 with X = r + a sqrt(s), Y = b sqrt(t).
    let rest = r * r + a * a * s - b * b * t;
    let two = Rational::from_integer(BigInt::from(2));
    match sign2(&rest, &(two * r * a), s) {
        1 => sx,
        -1 => sy,
        _ => 0,
    }
}

/// A sum of at most two surds with nonnegative coefficients. Equality is
/// equality of values.
#[derive(Clone, Debug)]
pub struct SurdSum {
    terms: [Surd; 2],
}

impl SurdSum {
    pub fn single(s: Surd) -> Result<Self> {
        Self::pair(s, Surd::zero())
    }

    pub fn pair(a: Surd, b: Surd) -> Result<Self> {
        if a.coeff.is_negative() || b.coeff.is_negative() {
            return Err(Error::InvalidSpec("surd sums require nonnegative terms".into()));
        }
        let mut terms = [a, b];
        // Merge like radicands so equal values have equal representations.
        if terms[0].radicand == terms[1].radicand {
            let merged = &terms[0].coeff + &terms[1].coeff;
            terms = [
                Surd {
                    coeff: merged,
                    radicand: terms[0].radicand.clone(),
                },
                Surd::zero(),
            ];
        }
        terms.sort_by(|x, y| y.radicand.cmp(&x.radicand).then(y.coeff.cmp(&x.coeff)));
        if terms[0].coeff.is_zero() {
            terms.swap(0, 1);
        }
        Ok(Self { terms })
    }

    pub fn rational(q: Rational) -> Result<Self> {
        Self::single(Surd::rational(q))
    }

    pub fn terms(&self) -> &[Surd; 2] {
        &self.terms
    }

    pub fn divide(&self, q: &Rational) -> Self {
        let inv = q.recip();
        Self {
            terms: [self.terms[0].scale(&inv), self.terms[1].scale(&inv)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match (self.terms[0].as_rational(), self.terms[1].as_rational()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms[0].to_f64() + self.terms[1].to_f64()
    }
}

impl Ord for SurdSum {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        // Both sides are nonnegative, so compare squares:
        // x^2 - y^2 = (a^2 m + b^2 n - c^2 p - d^2 q) + 2ab sqrt(mn) - 2cd sqrt(pq).
        let [x1, x2] = &self.terms;
        let [y1, y2] = &other.terms;
        let two = Rational::from_integer(BigInt::from(2));
        let rad = |s: &Surd| Rational::from_integer(s.radicand.clone());
        let r = x1.square() + x2.square() - y1.square() - y2.square();
        let a = &two * &x1.coeff * &x2.coeff;
        let s = rad(x1) * rad(x2);
        let b = -(&two * &y1.coeff * &y2.coeff);
        let t = rad(y1) * rad(y2);
        match sign3(&r, &a, &s, &b, &t) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

impl PartialEq for SurdSum {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SurdSum {}

impl PartialOrd for SurdSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms[1].coeff.is_zero() {
            write!(f, "{}", self.terms[0])
        } else {
            write!(f, "{} + {}", self.terms[0], self.terms[1])
        }
    }
}

/// `(x - y) / d` in floating point without cancellation: the exact squares
/// give `x^2 - y^2`, which is then divided by `(x + y) d`.
pub fn difference_quotient(x: &Surd, y: &Surd, d: &Rational) -> f64 {
    if x.is_rational() && y.is_rational() {
        return to_f64(&((&x.coeff - &y.coeff) / d));
    }
    let xs = x.scale(&d.recip());
    let ys = y.scale(&d.recip());
    let numerator = to_f64(&(xs.square() - ys.square()));
    let sum = xs.to_f64() + ys.to_f64();
    if sum == 0.0 {
        0.0
    } else {
        numerator / sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn s(c: Rational, r: i64) -> Surd {
        Surd::new(c, BigInt::from(r)).unwrap()
    }

    #[test]
    fn perfect_squares_are_absorbed() {
        let x = s(ratio(1, 2), 16);
        assert!(x.is_rational());
        assert_eq!(x.coeff(), &int(2));
    }

    #[test]
    fn over_sqrt_of_rational() {
        // 4 / sqrt(10) = (2/5) sqrt(10)
        let x = Surd::over_sqrt(int(4), &int(10)).unwrap();
        assert_eq!(x.coeff(), &ratio(2, 5));
        assert_eq!(x.radicand(), &BigInt::from(10));
        assert!((x.to_f64() - 4.0 / 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_term_ordering() {
        let a = SurdSum::single(s(int(3), 2)).unwrap(); // sqrt 18
        let b = SurdSum::single(s(int(2), 5)).unwrap(); // sqrt 20
        assert!(a < b);
        let c = SurdSum::single(s(int(1), 18)).unwrap();
        assert_eq!(a.cmp(&c), Ordering::Equal);
    }

    #[test]
    fn two_term_ordering() {
        // sqrt 2 + sqrt 3 (3.1463) versus sqrt 10 (3.1623) and pi-ish 22/7 (3.1429).
        let lhs = SurdSum::pair(s(int(1), 2), s(int(1), 3)).unwrap();
        assert!(lhs < SurdSum::single(s(int(1), 10)).unwrap());
        assert!(lhs > SurdSum::rational(ratio(22, 7)).unwrap());
        // sqrt 2 + sqrt 8 = 3 sqrt 2 exactly.
        let a = SurdSum::pair(s(int(1), 2), s(int(1), 8)).unwrap();
        assert_eq!(a.cmp(&SurdSum::single(s(int(3), 2)).unwrap()), Ordering::Equal);
        // 1 + sqrt 2 versus sqrt 3 + sqrt 5 - nearly tied differences checked by floats.
        let b = SurdSum::pair(s(int(1), 1), s(int(1), 2)).unwrap();
        let c = SurdSum::pair(s(int(1), 3), s(int(1), 5)).unwrap();
        assert_eq!(b.cmp(&c), b.to_f64().partial_cmp(&c.to_f64()).unwrap());
    }

    #[test]
    fn ordering_agrees_with_floats_on_a_grid() {
        let mut values = Vec::new();
        for a in 1..4 {
            for m in [1, 2, 3, 5, 6, 7] {
                for b in 0..3 {
                    for n in [1, 2, 3, 11] {
                        values.push(SurdSum::pair(s(ratio(a, 2), m), s(int(b), n)).unwrap());
                    }
                }
            }
        }
        for x in &values {
            for y in &values {
                let fx = x.to_f64();
                let fy = y.to_f64();
                if (fx - fy).abs() > 1e-9 {
                    assert_eq!(x.cmp(y), fx.partial_cmp(&fy).unwrap(), "{x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn difference_quotient_is_accurate() {
        let x = s(int(1), 1_000_001);
        let y = s(int(1), 1_000_000);
        let exact = 1.0 / (1_000_001f64.sqrt() + 1000.0);
        assert!((difference_quotient(&x, &y, &int(1)) - exact).abs() < 1e-18);
    }
}
