//! Polynomials in ħ with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial `Σ c_e ħ^e` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPoly {
    coeffs: BTreeMap<u32, BigRational>,
}

impl HPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        HPoly::default()
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// The variable ħ.
    pub fn hbar() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// A constant rational.
    pub fn constant(q: BigRational) -> Self {
        Self::monomial(q, 0)
    }

    /// A constant integer.
    pub fn integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// `q ħ^e`.
    pub fn monomial(q: BigRational, e: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(e, q);
        }
        HPoly { coeffs }
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `ħ^e`.
    pub fn coeff(&self, e: u32) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Highest ħ-exponent, if nonzero.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(e, q)| (*e, q))
    }

    /// Adds `q ħ^e` in place.
    pub fn add_term(&mut self, e: u32, q: &BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Adds another polynomial in place.
    pub fn add_assign_ref(&mut self, other: &HPoly) {
        for (e, q) in other.terms() {
            self.add_term(e, q);
        }
    }

    /// Multiplies by `ħ^e`.
    pub fn shift(&self, e: u32) -> HPoly {
        HPoly { coeffs: self.coeffs.iter().map(|(k, q)| (k + e, q.clone())).collect() }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> HPoly {
        if q.is_zero() {
            return HPoly::zero();
        }
        HPoly { coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * q)).collect() }
    }
}

impl Add for &HPoly {
    type Output = HPoly;
    fn add(self, rhs: &HPoly) -> HPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &HPoly {
    type Output = HPoly;
    fn sub(self, rhs: &HPoly) -> HPoly {
        self + &(-rhs)
    }
}

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        HPoly { coeffs: self.coeffs.iter().map(|(k, q)| (*k, -q)).collect() }
    }
}

impl Mul for &HPoly {
    type Output = HPoly;
    fn mul(self, rhs: &HPoly) -> HPoly {
        let mut out = HPoly::zero();
        for (e1, q1) in self.terms() {
            for (e2, q2) in rhs.terms() {
                out.add_term(e1 + e2, &(q1 * q2));
            }
        }
        out
    }
}

/// Formats a rational as an integer when possible, otherwise as `p/q`.
pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, q) in self.terms() {
            let sign = if q.is_negative() { "-" } else { "+" };
            if first {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = q.abs();
            let hs = vec!["h"; e as usize].join("*");
            match (mag.is_one(), e) {
                (_, 0) => f.write_str(&fmt_rational(&mag))?,
                (true, _) => f.write_str(&hs)?,
                (false, _) => write!(f, "{}*{hs}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let p = &HPoly::one() + &HPoly::hbar();
        let sq = &p * &p;
        assert_eq!(sq.coeff(0), BigRational::one());
        assert_eq!(sq.coeff(1), BigRational::from_integer(2.into()));
        assert_eq!(sq.coeff(2), BigRational::one());
        assert!((&sq - &sq).is_zero());
        assert_eq!(sq.to_string(), "1 + 2*h + h*h");
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut p = HPoly::hbar();
        p.add_term(1, &BigRational::from_integer((-1).into()));
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }
}
