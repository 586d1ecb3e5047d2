//! Integer Laurent polynomials in one variable `A`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent → nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·A^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| acc + Self::monomial(c, e))
    }

    pub fn coefficient(&self, e: i64) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: i64, c: i64) {
        let entry = self.terms.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }
}

impl Add for LaurentPolynomial {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for LaurentPolynomial {
    type Output = Self;

    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for LaurentPolynomial {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: Self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: Self) -> LaurentPolynomial {
        &self * &rhs
    }
}

/// Ascending exponents, e.g. `A^-6 + A^-4 - 2A^-2 + 1`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, &c)) in self.terms.iter().enumerate() {
            let magnitude = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if magnitude != 1 {
                write!(f, "{magnitude}")?;
            }
            if e == 1 {
                f.write_str("A")?;
            } else {
                write!(f, "A^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let p = LaurentPolynomial::from_terms([(-6, 1), (-4, 1), (0, 1), (-2, 1)]);
        assert_eq!(p.to_string(), "A^-6 + A^-4 + A^-2 + 1");
        let q = LaurentPolynomial::from_terms([(1, -2), (3, 1), (0, -1)]);
        assert_eq!(q.to_string(), "-1 - 2A + A^3");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic_cancels() {
        let a = LaurentPolynomial::from_terms([(1, 1), (-1, 1)]);
        let b = LaurentPolynomial::from_terms([(1, 1), (-1, -1)]);
        // (A + A^-1)(A - A^-1) = A^2 - A^-2
        assert_eq!(a.clone() * b, LaurentPolynomial::from_terms([(2, 1), (-2, -1)]));
        assert!((a.clone() - a).is_zero());
    }
}
