//! Exact Laurent polynomials in one variable `a` with integer coefficients.
//!
//! Terms are kept in a sorted map from exponent to a nonzero `i128`
//! coefficient. Every arithmetic operation is checked and reports
//! [`Error::ArithmeticOverflow`] instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i128>,
}

/// One term of the JSON rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: i32,
    pub coef: i128,
}

fn add_term(terms: &mut BTreeMap<i32, i128>, exp: i32, coef: i128) -> Result<()> {
    if coef == 0 {
        return Ok(());
    }
    let slot = terms.entry(exp).or_insert(0);
    *slot = slot.checked_add(coef).ok_or(Error::ArithmeticOverflow)?;
    if *slot == 0 {
        terms.remove(&exp);
    }
    Ok(())
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mono(1, 0)
    }

    /// `coef · a^exp`; a zero coefficient yields the zero polynomial.
    pub fn mono(coef: i128, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if coef != 0 {
            terms.insert(exp, coef);
        }
        Self { terms }
    }

    /// Sums the given `(exp, coef)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i32, i128)>>(pairs: I) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (exp, coef) in pairs {
            add_term(&mut terms, exp, coef)?;
        }
        Ok(Self { terms })
    }

    /// `−a² − a⁻²`, the value of one extra circle.
    pub fn loop_factor() -> Self {
        Self {
            terms: BTreeMap::from([(-2, -1), (2, -1)]),
        }
    }

    /// `(−a² − a⁻²)^k`, expanded by the binomial theorem.
    ///
    /// The coefficient of `a^(2k − 4j)` is `(−1)^k · C(k, j)`.
    pub fn loop_factor_pow(k: u32) -> Result<Self> {
        let sign: i128 = if k.is_multiple_of(2) { 1 } else { -1 };
        let mut binom: i128 = 1;
        let mut terms = BTreeMap::new();
        for j in 0..=k {
            let exp = i32::try_from(2 * i64::from(k) - 4 * i64::from(j))
                .map_err(|_| Error::ArithmeticOverflow)?;
            terms.insert(exp, sign * binom);
            if j < k {
                binom = binom
                    .checked_mul(i128::from(k - j))
                    .ok_or(Error::ArithmeticOverflow)?
                    / i128::from(j + 1);
            }
        }
        Ok(Self { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i128 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Terms in decreasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms
            .iter()
            .rev()
            .map(|(&exp, &coef)| Term { exp, coef })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms.clone();
        for (&exp, &coef) in &other.terms {
            add_term(&mut terms, exp, coef)?;
        }
        Ok(Self { terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.scale_shift(-1, 0)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                let exp = e1.checked_add(e2).ok_or(Error::ArithmeticOverflow)?;
                let coef = c1.checked_mul(c2).ok_or(Error::ArithmeticOverflow)?;
                add_term(&mut terms, exp, coef)?;
            }
        }
        Ok(Self { terms })
    }

    /// Multiplication by the monomial `coef · a^exp`.
    pub fn scale_shift(&self, coef: i128, exp: i32) -> Result<Self> {
        if coef == 0 {
            return Ok(Self::zero());
        }
        let mut terms = BTreeMap::new();
        for (&e, &c) in &self.terms {
            let e = e.checked_add(exp).ok_or(Error::ArithmeticOverflow)?;
            let c = c.checked_mul(coef).ok_or(Error::ArithmeticOverflow)?;
            terms.insert(e, c);
        }
        Ok(Self { terms })
    }

    /// Leading exponent minus lowest exponent.
    pub fn span(&self) -> Result<u32> {
        match (self.max_exp(), self.min_exp()) {
            (Some(hi), Some(lo)) => Ok((i64::from(hi) - i64::from(lo)) as u32),
            _ => Err(Error::UndefinedSpan),
        }
    }

    /// Multiplies by `(−a)^(−3w) = (−1)^w · a^(−3w)`.
    pub fn unit_normalize(&self, writhe: i32) -> Result<Self> {
        let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
        let exp = writhe.checked_mul(-3).ok_or(Error::ArithmeticOverflow)?;
        self.scale_shift(sign, exp)
    }

    /// Returns `k` with `other == (−a³)^k · self`, if such `k` exists.
    ///
    /// Two zero polynomials are related by `k = 0`.
    pub fn unit_ratio(&self, other: &Self) -> Option<i32> {
        match (self.min_exp(), other.min_exp()) {
            (None, None) => Some(0),
            (Some(lo1), Some(lo2)) => {
                let shift = lo2 - lo1;
                if shift % 3 != 0 {
                    return None;
                }
                let k = shift / 3;
                let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
                let scaled = self.scale_shift(sign, shift).ok()?;
                (scaled == *other).then_some(k)
            }
            _ => None,
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Decreasing exponents, e.g. `-a^2 + 3 - 2a^-4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, Term { exp, coef }) in self.terms().enumerate() {
            let magnitude = coef.unsigned_abs();
            if i == 0 {
                if coef < 0 {
                    f.write_str("-")?;
                }
            } else if coef < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if exp == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if magnitude != 1 {
                    write!(f, "{magnitude}")?;
                }
                write!(f, "a^{exp}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(deserializer)?;
        LaurentPoly::from_terms(terms.into_iter().map(|t| (t.exp, t.coef)))
            .map_err(serde::de::Error::custom)
    }
}
