//! Coefficient fields.
//!
//! Everything in this crate is exact. The arithmetic is written against
//! [`ExactField`] so the same code runs over arbitrary-precision rationals
//! (the default, see [`crate::Rational`]) or over fixed-width rationals when
//! the caller knows coefficients stay small.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// A field with exact equality and a total order used only for canonical
/// sorting of outputs.
pub trait ExactField:
    Clone
    + PartialEq
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }

    /// Monic gcd of two ascending coefficient vectors.
    fn poly_gcd(a: &[Self], b: &[Self]) -> Vec<Self> {
        crate::poly::univariate::euclid_gcd(a, b)
    }

    /// Rational roots, ascending, of a squarefree polynomial given by
    /// ascending coefficients.
    fn rational_roots(p: &[Self]) -> Vec<Self>;
}

fn roots_via_big<T>(p: &[Ratio<T>], back: impl Fn(BigInt) -> T) -> Vec<Ratio<T>>
where
    T: Clone + num_integer::Integer + Into<BigInt>,
{
    let big: Vec<BigRational> = p
        .iter()
        .map(|c| BigRational::new(c.numer().clone().into(), c.denom().clone().into()))
        .collect();
    crate::poly::integer::rational_roots(&big)
        .into_iter()
        .map(|r| {
            let (n, d) = r.into_raw();
            Ratio::new(back(n), back(d))
        })
        .collect()
}

impl ExactField for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly_gcd(a: &[Self], b: &[Self]) -> Vec<Self> {
        crate::poly::integer::gcd(a, b)
    }

    fn rational_roots(p: &[Self]) -> Vec<Self> {
        crate::poly::integer::rational_roots(p)
    }
}

impl ExactField for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn rational_roots(p: &[Self]) -> Vec<Self> {
        roots_via_big(p, |n| i64::try_from(n).expect("root fits in i64"))
    }
}

impl ExactField for Ratio<i128> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }

    fn rational_roots(p: &[Self]) -> Vec<Self> {
        roots_via_big(p, |n| i128::try_from(n).expect("root fits in i128"))
    }
}

/// Parses `"p/q"` or `"p"` into a big rational.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer: BigInt = num
        .parse()
        .map_err(|_| RationalParseError::Malformed(text.to_string()))?;
    let denom: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| RationalParseError::Malformed(text.to_string()))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(RationalParseError::DenominatorZero(text.to_string()));
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("denominator is zero in rational `{0}`")]
    DenominatorZero(String),
    #[error("malformed rational `{0}` (expected `p/q` or an integer)")]
    Malformed(String),
}
