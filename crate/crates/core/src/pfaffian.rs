//! Pfaffians over the truncated ring and the type-D class built from them.
//!
//! With trivial Chern classes on one isotropic bundle and total Chern class
//! `exp(2 xi)` on the others, the one-row classes specialise to
//! `Q_m = (2 xi)^m / m!`. Two-row classes follow the usual Schur Q rule
//!
//! ```text
//! Q_{a,b} = Q_a Q_b + 2 sum_{k=1..b} (-1)^k Q_{a+k} Q_{b-k}
//! ```
//!
//! and a strict partition with an even number of parts (pad with a zero part
//! otherwise) gives `Q_lambda = Pf[Q_{lambda_i, lambda_j}]`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::exactring::{factorial, ExactRingError, ExactScalar, TruncatedPoly};
use crate::prym::{PrymClass, PrymError, VanishingSequence};
use crate::tableaux::StrictPartition;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfaffianError {
    #[error("Pfaffian needs an even-sized matrix, got size {0}")]
    OddSize(usize),
    #[error("index ({0}, {1}) out of range for size {2}")]
    OutOfRange(usize, usize, usize),
    #[error("diagonal entry ({0}, {0}) of an antisymmetric matrix is fixed at zero")]
    Diagonal(usize),
    #[error("Schur Q pair entry needs a >= b, got a = {0}, b = {1}")]
    PairOrder(usize, usize),
    #[error("matrices larger than 64 are not supported, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Ring(#[from] ExactRingError),
}

/// Antisymmetric matrix with entries in `Q[xi]/(xi^N)`. Only the strict upper
/// triangle is stored; absent entries are zero.
#[derive(Clone, PartialEq)]
pub struct AntisymmetricMatrix<T> {
    size: usize,
    trunc: usize,
    upper: BTreeMap<(usize, usize), TruncatedPoly<T>>,
}

impl<T: ExactScalar> std::fmt::Debug for AntisymmetricMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AntisymmetricMatrix")
            .field("size", &self.size)
            .field("trunc", &self.trunc)
            .field("upper", &self.upper)
            .finish()
    }
}

impl<T: ExactScalar> AntisymmetricMatrix<T> {
    pub fn new(size: usize, trunc: usize) -> Self {
        assert!(trunc >= 1, "truncation must be positive");
        Self {
            size,
            trunc,
            upper: BTreeMap::new(),
        }
    }

    /// Builds from a closure evaluated on every `i < j` (0-indexed).
    pub fn from_fn<F>(size: usize, trunc: usize, mut f: F) -> Result<Self, PfaffianError>
    where
        F: FnMut(usize, usize) -> Result<TruncatedPoly<T>, PfaffianError>,
    {
        let mut m = Self::new(size, trunc);
        for i in 0..size {
            for j in i + 1..size {
                m.set(i, j, f(i, j)?)?;
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    /// Sets `M[i][j] = p` and, implicitly, `M[j][i] = -p`.
    pub fn set(&mut self, i: usize, j: usize, p: TruncatedPoly<T>) -> Result<(), PfaffianError> {
        if i >= self.size || j >= self.size {
            return Err(PfaffianError::OutOfRange(i, j, self.size));
        }
        if p.truncation() != self.trunc {
            return Err(ExactRingError::TruncationMismatch {
                left: self.trunc,
                right: p.truncation(),
            }
            .into());
        }
        let (key, val) = match i.cmp(&j) {
            std::cmp::Ordering::Less => ((i, j), p),
            std::cmp::Ordering::Greater => ((j, i), p.neg()),
            std::cmp::Ordering::Equal => return Err(PfaffianError::Diagonal(i)),
        };
        if val.is_zero() {
            self.upper.remove(&key);
        } else {
            self.upper.insert(key, val);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> TruncatedPoly<T> {
        let zero = || TruncatedPoly::zero(self.trunc);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper.get(&(i, j)).cloned().unwrap_or_else(zero),
            std::cmp::Ordering::Greater => self
                .upper
                .get(&(j, i))
                .map(TruncatedPoly::neg)
                .unwrap_or_else(zero),
            std::cmp::Ordering::Equal => zero(),
        }
    }
}

/// Pfaffian by expansion along the first surviving row, memoised on the set
/// of surviving indices. `Pf` of the empty matrix is 1.
pub fn pfaffian<T: ExactScalar>(m: &AntisymmetricMatrix<T>) -> Result<TruncatedPoly<T>, PfaffianError> {
    if m.size % 2 == 1 {
        return Err(PfaffianError::OddSize(m.size));
    }
    if m.size > 64 {
        return Err(PfaffianError::TooLarge(m.size));
    }
    let full = if m.size == 64 { u64::MAX } else { (1u64 << m.size) - 1 };
    let mut memo = HashMap::new();
    expand(m, full, &mut memo)
}

fn expand<T: ExactScalar>(
    m: &AntisymmetricMatrix<T>,
    alive: u64,
    memo: &mut HashMap<u64, TruncatedPoly<T>>,
) -> Result<TruncatedPoly<T>, PfaffianError> {
    if alive == 0 {
        return Ok(TruncatedPoly::one(m.trunc));
    }
    if let Some(p) = memo.get(&alive) {
        return Ok(p.clone());
    }
    let first = alive.trailing_zeros() as usize;
    let rest = alive & !(1u64 << first);
    let mut acc = TruncatedPoly::zero(m.trunc);
    let mut positive = true;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let entry = m.get(first, j);
        if !entry.is_zero() {
            let minor = expand(m, rest & !(1u64 << j), memo)?;
            let term = entry.try_mul(&minor)?;
            acc = if positive { acc.try_add(&term)? } else { acc.try_sub(&term)? };
        }
        positive = !positive;
    }
    memo.insert(alive, acc.clone());
    Ok(acc)
}

/// One-row class `Q_m = (2 xi)^m / m!`, zero for `m < 0`.
pub fn q_single<T: ExactScalar>(m: i64, trunc: usize) -> TruncatedPoly<T> {
    if m < 0 {
        return TruncatedPoly::zero(trunc);
    }
    let m = m as usize;
    let two_pow = (0..m).fold(T::one(), |acc, _| acc * T::from_int(2));
    TruncatedPoly::monomial(two_pow / factorial::<T>(m), m, trunc)
}

/// Two-row class `Q_{a,b}` for `a >= b >= 0`; `Q_{a,0} = Q_a` for `a > 0`.
///
/// The pair class is antisymmetric, so `Q_{a,a} = 0`. The recursion gives
/// that for `a >= 1`; the degenerate pair `(0, 0)` is set to zero directly.
pub fn q_entry<T: ExactScalar>(a: usize, b: usize, trunc: usize) -> Result<TruncatedPoly<T>, PfaffianError> {
    if a < b {
        return Err(PfaffianError::PairOrder(a, b));
    }
    if a == 0 {
        return Ok(TruncatedPoly::zero(trunc));
    }
    let (a, b) = (a as i64, b as i64);
    let mut acc = q_single::<T>(a, trunc).try_mul(&q_single(b, trunc))?;
    let two = T::from_int(2);
    for k in 1..=b {
        let term = q_single::<T>(a + k, trunc)
            .try_mul(&q_single(b - k, trunc))?
            .scale(&two);
        acc = if k % 2 == 1 { acc.try_sub(&term)? } else { acc.try_add(&term)? };
    }
    Ok(acc)
}

/// `Pf[Q_{l_i, l_j}]` for a strict partition, padded with a zero part when
/// the number of parts is odd.
pub fn q_pfaffian<T: ExactScalar>(shape: &StrictPartition, trunc: usize) -> Result<TruncatedPoly<T>, PfaffianError> {
    let mut parts = shape.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    let m = AntisymmetricMatrix::from_fn(parts.len(), trunc, |i, j| q_entry(parts[i], parts[j], trunc))?;
    pfaffian(&m)
}

/// `2^(-l(a)) Pf[...]` in `Q[xi]/(xi^g)`, for any exact scalar.
pub fn class_b_pfaffian_poly<T: ExactScalar>(g: usize, a: &VanishingSequence) -> Result<TruncatedPoly<T>, PfaffianError> {
    let pf = q_pfaffian::<T>(&a.shape(), g)?;
    let inv = (0..a.ell()).fold(T::one(), |acc, _| acc / T::from_int(2));
    Ok(pf.scale(&inv))
}

/// The class of the pointed locus through the Pfaffian route.
pub fn class_b_pfaffian(g: usize, a: &VanishingSequence) -> Result<PrymClass, PrymError> {
    crate::prym::check_genus(g)?;
    let poly = class_b_pfaffian_poly::<BigRational>(g, a).map_err(PrymError::Pfaffian)?;
    let codim = a.weight();
    for (k, _) in poly.terms() {
        assert_eq!(k, codim, "Pfaffian class for {a} has a term outside codimension {codim}");
    }
    let coeff = poly.coeff(codim);
    debug_assert!(codim < g || coeff.is_zero());
    Ok(PrymClass::new(g, codim, coeff))
}
