//! Laurent polynomials in one variable y with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// `coeff · y^exp`.
    pub fn monomial(exp: i64, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// Multiplies by `y^shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    /// Value at y = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// d/dy at y = 1, i.e. Σ exp · coeff.
    pub fn derivative_at_one(&self) -> BigInt {
        self.coeffs.iter().map(|(e, c)| c * BigInt::from(*e)).sum()
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("y")?,
                1 => write!(f, "{mag}y")?,
                _ if unit => write!(f, "y^{e}")?,
                _ => write!(f, "{mag}y^{e}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as `{"exponent": "coefficient"}` with decimal-string coefficients.
impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = LaurentPolynomial::monomial(3, big(2));
        p.add_term(3, big(-2));
        assert!(p.is_zero());
        assert_eq!(LaurentPolynomial::monomial(1, big(0)), LaurentPolynomial::zero());
    }

    #[test]
    fn evaluation_and_derivative() {
        let mut p = LaurentPolynomial::monomial(2, big(1));
        p.add_term(4, big(2));
        p.add_term(-1, big(3));
        assert_eq!(p.eval_at_one(), big(6));
        assert_eq!(p.derivative_at_one(), big(2 + 8 - 3));
        assert_eq!(p.shifted(-2).coeff(0), big(1));
        assert_eq!(p.scaled(&big(3)).coeff(4), big(6));
    }

    #[test]
    fn display_and_json() {
        let mut p = LaurentPolynomial::monomial(2, big(1));
        p.add_term(4, big(2));
        assert_eq!(p.to_string(), "y^2 + 2y^4");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"2":"1","4":"2"}"#);
        assert_eq!(LaurentPolynomial::monomial(-1, big(-1)).to_string(), "-y^-1");
        assert_eq!(LaurentPolynomial::monomial(1, big(1)).to_string(), "y");
    }
}
