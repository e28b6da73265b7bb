//! Exact scalars and the truncated graded ring `Q[xi]/(xi^N)`.
//!
//! Every coefficient in the crate lives in an [`ExactScalar`]: a rational
//! type with exact arithmetic. Floating point types deliberately do not
//! implement the trait.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactRingError {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("truncation must be positive")]
    ZeroTruncation,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Rational scalar with exact field arithmetic.
///
/// Implemented for `BigRational`, `Ratio<i64>` and `Ratio<i128>`. The
/// fixed-width variants panic on overflow, so they are only suitable for
/// small degrees.
pub trait ExactScalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }

    /// Parses `"p/q"` or `"p"`; the result is reduced.
    fn parse_exact(s: &str) -> Result<Self, ExactRingError>;

    fn is_integral(&self) -> bool;
}

macro_rules! exact_scalar_impl {
    ($($t:ty)*) => ($(
        impl ExactScalar for $t {
            fn parse_exact(s: &str) -> Result<Self, ExactRingError> {
                let s = s.trim();
                let parsed = if s.contains('/') {
                    <$t>::from_str(s)
                } else {
                    <$t>::from_str(&format!("{s}/1"))
                };
                parsed.map_err(|_| ExactRingError::Parse(s.to_string()))
            }

            fn is_integral(&self) -> bool {
                self.is_integer()
            }
        }
    )*)
}

exact_scalar_impl!(BigRational Ratio<i64> Ratio<i128>);

/// `n!` as an exact scalar.
pub fn factorial<T: ExactScalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_int(k as i64))
}

/// `n!` as a big integer.
pub fn factorial_int(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Element of `Q[xi]/(xi^N)`; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct TruncatedPoly<T> {
    trunc: usize,
    coeffs: BTreeMap<usize, T>,
}

impl<T: ExactScalar> TruncatedPoly<T> {
    pub fn zero(trunc: usize) -> Self {
        assert!(trunc >= 1, "truncation must be positive");
        Self {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(T::one(), trunc)
    }

    pub fn constant(c: T, trunc: usize) -> Self {
        Self::monomial(c, 0, trunc)
    }

    /// `c * xi^degree`; vanishes when `degree >= trunc`.
    pub fn monomial(c: T, degree: usize, trunc: usize) -> Self {
        let mut p = Self::zero(trunc);
        p.set(degree, c);
        p
    }

    /// The generator `xi`.
    pub fn xi(trunc: usize) -> Self {
        Self::monomial(T::one(), 1, trunc)
    }

    /// Builds from `(degree, coeff)` pairs, summing repeated degrees.
    pub fn from_terms<I>(trunc: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, T)>,
    {
        let mut p = Self::zero(trunc);
        for (k, c) in terms {
            let cur = p.coeff(k);
            p.set(k, cur + c);
        }
        p
    }

    fn set(&mut self, degree: usize, c: T) {
        if degree >= self.trunc || c.is_zero() {
            self.coeffs.remove(&degree);
        } else {
            self.coeffs.insert(degree, c);
        }
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, degree: usize) -> T {
        self.coeffs.get(&degree).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Highest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    fn check(&self, other: &Self) -> Result<(), ExactRingError> {
        if self.trunc != other.trunc {
            return Err(ExactRingError::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactRingError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let cur = out.coeff(*k);
            out.set(*k, cur + c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactRingError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactRingError> {
        self.check(other)?;
        let mut out = Self::zero(self.trunc);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let k = i + j;
                if k >= self.trunc {
                    // inner degrees only grow from here
                    break;
                }
                let cur = out.coeff(k);
                out.set(k, cur + a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.trunc);
        for (k, c) in &self.coeffs {
            out.set(*k, c.clone() * s.clone());
        }
        out
    }

    /// Same element read in another truncation (dropping degrees `>= trunc`).
    pub fn retruncate(&self, trunc: usize) -> Self {
        Self::from_terms(trunc, self.coeffs.iter().map(|(k, c)| (*k, c.clone())))
    }
}

/// `exp(s*xi) = sum_{k<N} (s xi)^k / k!`.
pub fn exp_scaled_xi<T: ExactScalar>(s: i64, trunc: usize) -> TruncatedPoly<T> {
    let mut p = TruncatedPoly::zero(trunc);
    let mut c = T::one();
    let s = T::from_int(s);
    for k in 0..trunc {
        if k > 0 {
            c = c * s.clone() / T::from_int(k as i64);
        }
        p.set(k, c.clone());
    }
    p
}

/// Degree on a genus-`g` Prym: coefficient of `xi^(g-1)` times `(g-1)!`.
pub fn poincare_degree<T: ExactScalar>(p: &TruncatedPoly<T>, g: usize) -> T {
    assert!(g >= 1, "genus must be positive");
    p.coeff(g - 1) * factorial::<T>(g - 1)
}

impl<T: ExactScalar> Display for TruncatedPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·xi")?,
                _ => write!(f, "{c}·xi^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: ExactScalar> Debug for TruncatedPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedPoly[N={}]({})", self.trunc, self)
    }
}

/// Serde adapter writing a rational as the string `"p/q"` (or `"p"`).
pub mod rational_string {
    use super::ExactScalar;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: ExactScalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T: ExactScalar, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        T::parse_exact(&s).map_err(de::Error::custom)
    }
}

struct CoeffMap<'a, T>(&'a BTreeMap<usize, T>);

impl<T: ExactScalar> Serialize for CoeffMap<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, c) in self.0 {
            m.serialize_entry(&k.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<T: ExactScalar> Serialize for TruncatedPoly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TruncatedPoly", 2)?;
        st.serialize_field("trunc", &self.trunc)?;
        st.serialize_field("coeffs", &CoeffMap(&self.coeffs))?;
        st.end()
    }
}

impl<'de, T: ExactScalar> Deserialize<'de> for TruncatedPoly<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            trunc: usize,
            coeffs: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.trunc == 0 {
            return Err(de::Error::custom(ExactRingError::ZeroTruncation));
        }
        let mut p = TruncatedPoly::zero(raw.trunc);
        for (k, c) in raw.coeffs {
            let k: usize = k
                .parse()
                .map_err(|_| de::Error::custom(format!("bad degree key {k:?}")))?;
            let c = T::parse_exact(&c).map_err(de::Error::custom)?;
            let cur = p.coeff(k);
            p.set(k, cur + c);
        }
        Ok(p)
    }
}
