//! Vanishing sequences and the invariants attached to them: expected
//! dimension, the class of the pointed locus, its degree, the tableau number
//! `n_a` and the Prym-Tyurin exponent.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactring::{factorial, factorial_int, rational_string, ExactScalar};
use crate::pfaffian::{class_b_pfaffian, PfaffianError};
use crate::tableaux::{
    count_sst_bruteforce, count_sst_formula, strict_partitions, StrictPartition, TableauError,
    DEFAULT_ENUMERATION_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrymError {
    #[error("vanishing orders must be strictly increasing, got {0:?}")]
    NotIncreasing(Vec<usize>),
    #[error("a vanishing sequence needs at least one entry")]
    EmptySequence,
    #[error("cannot parse vanishing sequence {0:?}: expected comma-separated ascending integers")]
    Parse(String),
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("the exponent formula requires beta(g, a) = 1, got beta = {0}")]
    BetaNotOne(i64),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
}

pub(crate) fn check_genus(g: usize) -> Result<(), PrymError> {
    if g < 2 {
        Err(PrymError::GenusTooSmall(g))
    } else {
        Ok(())
    }
}

/// Strictly increasing vanishing orders `a_0 < a_1 < ... < a_r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VanishingSequence(Vec<usize>);

impl VanishingSequence {
    pub fn new(values: Vec<usize>) -> Result<Self, PrymError> {
        if values.is_empty() {
            return Err(PrymError::EmptySequence);
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PrymError::NotIncreasing(values));
        }
        Ok(Self(values))
    }

    /// `(0, 1, ..., r)`: no condition imposed at the point.
    pub fn unpointed(r: usize) -> Self {
        Self((0..=r).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `|a|`
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of positive entries.
    pub fn ell(&self) -> usize {
        self.0.iter().filter(|&&v| v > 0).count()
    }

    /// `r`, one less than the length.
    pub fn r(&self) -> usize {
        self.0.len() - 1
    }

    /// The shape `(a_r, ..., a_0)` with a zero `a_0` dropped.
    pub fn shape(&self) -> StrictPartition {
        let parts = self.0.iter().rev().copied().filter(|&v| v > 0).collect();
        StrictPartition::new(parts).expect("reversed increasing positive entries are strict")
    }

    /// The same sequence without a leading zero, if that leaves anything.
    pub fn positive_part(&self) -> Option<Self> {
        let v: Vec<usize> = self.0.iter().copied().filter(|&v| v > 0).collect();
        (!v.is_empty()).then_some(Self(v))
    }

    /// Canonical key `"a0,a1,..."`.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromStr for VanishingSequence {
    type Err = PrymError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .trim()
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PrymError::Parse(s.to_string()))?;
        Self::new(values)
    }
}

impl fmt::Display for VanishingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// `coeff * xi^codim` on a genus-`g` Prym, read in degrees `< g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymClass {
    g: usize,
    codim: usize,
    #[serde(with = "rational_string")]
    coeff: BigRational,
}

impl PrymClass {
    /// Classes of codimension `>= g` are zero.
    pub fn new(g: usize, codim: usize, coeff: BigRational) -> Self {
        let coeff = if codim >= g { BigRational::zero() } else { coeff };
        Self { g, codim, coeff }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl fmt::Display for PrymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.is_zero(), self.codim) {
            (true, _) => write!(f, "0"),
            (false, 0) => write!(f, "{}", self.coeff),
            (false, 1) => write!(f, "{}·xi", self.coeff),
            (false, k) => write!(f, "{}·xi^{}", self.coeff, k),
        }
    }
}

/// Expected dimension `g - 1 - |a|`; may be negative.
pub fn beta(g: usize, a: &VanishingSequence) -> i64 {
    g as i64 - 1 - a.weight() as i64
}

/// Whether the locus is nonempty for a general curve, double cover and
/// point. This is a statement about general triples only: special triples
/// can carry nonempty loci even when `beta < 0`.
pub fn general_nonempty(g: usize, a: &VanishingSequence) -> bool {
    beta(g, a) >= 0
}

/// `2^(|a| - l(a)) prod 1/a_i! prod_{j<i} (a_i - a_j)/(a_i + a_j)`.
pub fn closed_coefficient<T: ExactScalar>(a: &VanishingSequence) -> T {
    let v = a.values();
    let mut c = T::one();
    for _ in 0..(a.weight() - a.ell()) {
        c = c * T::from_int(2);
    }
    for &x in v {
        c = c / factorial::<T>(x);
    }
    for (i, &ai) in v.iter().enumerate() {
        for &aj in &v[..i] {
            c = c * T::from_int((ai - aj) as i64) / T::from_int((ai + aj) as i64);
        }
    }
    c
}

/// The class through the closed product formula.
pub fn class_b_closed(g: usize, a: &VanishingSequence) -> Result<PrymClass, PrymError> {
    check_genus(g)?;
    Ok(PrymClass::new(g, a.weight(), closed_coefficient(a)))
}

fn integral(q: &BigRational, what: &str) -> BigInt {
    assert!(q.is_integer(), "{what} is not an integer: {q}");
    q.to_integer()
}

/// `|a|!` times the class coefficient. A finite point count when `beta = 0`;
/// zero when the class vanishes by truncation.
pub fn degree_b(g: usize, a: &VanishingSequence) -> Result<BigInt, PrymError> {
    let class = class_b_closed(g, a)?;
    let d = class.coeff() * BigRational::from_integer(factorial_int(a.weight()));
    Ok(integral(&d, &format!("degree of B({g}, {a})")))
}

/// `2^(|a| - l(a))` times the number of standard shifted tableaux of the
/// shape of `a`, using the product formula for the count.
pub fn n_a_formula(a: &VanishingSequence) -> BigUint {
    count_sst_formula(&a.shape()) << (a.weight() - a.ell())
}

/// Source of shifted tableau counts for the enumeration-backed routes.
pub trait ShapeCounter {
    fn count(&self, shape: &StrictPartition) -> Result<u64, TableauError>;
    fn bound(&self) -> usize;
}

/// Counts by exhaustive enumeration.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    pub bound: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        Self {
            bound: DEFAULT_ENUMERATION_BOUND,
        }
    }
}

impl ShapeCounter for BruteForce {
    fn count(&self, shape: &StrictPartition) -> Result<u64, TableauError> {
        count_sst_bruteforce(shape, self.bound)
    }

    fn bound(&self) -> usize {
        self.bound
    }
}

/// `n_a` with the tableau count taken from `counter`.
pub fn n_a_with(a: &VanishingSequence, counter: &dyn ShapeCounter) -> Result<BigUint, PrymError> {
    let n = counter.count(&a.shape())?;
    Ok(BigUint::from(n) << (a.weight() - a.ell()))
}

pub fn n_a_bruteforce(a: &VanishingSequence, bound: usize) -> Result<BigUint, PrymError> {
    n_a_with(a, &BruteForce { bound })
}

/// `(g - 2)!` times the class coefficient, defined when `beta(g, a) = 1`.
pub fn prym_tyurin_exponent(g: usize, a: &VanishingSequence) -> Result<BigInt, PrymError> {
    check_genus(g)?;
    let b = beta(g, a);
    if b != 1 {
        return Err(PrymError::BetaNotOne(b));
    }
    let e = closed_coefficient::<BigRational>(a) * BigRational::from_integer(factorial_int(g - 2));
    Ok(integral(&e, &format!("exponent for ({g}, {a})")))
}

/// Every vanishing sequence of weight `w`, in lexicographic order. For each
/// strict partition there is the sequence of its parts and, separately, the
/// same with a leading zero.
pub fn sequences_of_weight(w: usize) -> Vec<VanishingSequence> {
    let mut out: Vec<VanishingSequence> = strict_partitions(w)
        .into_iter()
        .flat_map(|p| {
            let asc: Vec<usize> = p.parts().iter().rev().copied().collect();
            let with_zero = std::iter::once(0).chain(asc.iter().copied()).collect();
            let plain = (!asc.is_empty()).then_some(VanishingSequence(asc));
            plain.into_iter().chain(std::iter::once(VanishingSequence(with_zero)))
        })
        .collect();
    out.sort();
    out
}

/// All sequences with weight in `0..=max_weight`, weight first, then lexicographic.
pub fn sequences_up_to(max_weight: usize) -> Vec<VanishingSequence> {
    (0..=max_weight).flat_map(sequences_of_weight).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub a: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub a: String,
    pub g: usize,
    pub weight: usize,
    pub degree: String,
    pub n_a: String,
    pub sst_formula: String,
    pub sst_bruteforce: u64,
    pub closed: String,
    pub pfaffian: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_weight: usize,
    pub checked: usize,
    pub failures: Vec<VerifyFailure>,
    pub records: Vec<VerifyRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Closed-form class provider; swappable so a broken formula can be fed to
/// the checker.
pub type ClassFn<'a> = &'a dyn Fn(usize, &VanishingSequence) -> Result<PrymClass, PrymError>;

/// Checks, for every sequence of weight at most `max_weight` at `g = |a| + 1`:
/// degree against `n_a` from enumerated tableaux, closed class against the
/// Pfaffian class, and the tableau product formula against enumeration.
pub fn verify_identities(max_weight: usize, counter: &dyn ShapeCounter) -> Result<VerifyReport, PrymError> {
    verify_identities_with(max_weight, counter, &class_b_closed)
}

pub fn verify_identities_with(
    max_weight: usize,
    counter: &dyn ShapeCounter,
    closed: ClassFn<'_>,
) -> Result<VerifyReport, PrymError> {
    if max_weight > counter.bound() {
        return Err(TableauError::BoundExceeded {
            weight: max_weight,
            bound: counter.bound(),
        }
        .into());
    }
    let mut failures = Vec::new();
    let mut records = Vec::new();
    for a in sequences_up_to(max_weight) {
        let w = a.weight();
        // genus floor: a = (0) is checked at g = 2
        let g = (w + 1).max(2);
        let key = a.key();
        let mut fail = |check: &str, expected: String, actual: String| {
            failures.push(VerifyFailure {
                a: key.clone(),
                check: check.to_string(),
                expected,
                actual,
            })
        };
        let shape = a.shape();
        let brute = counter.count(&shape)?;
        let formula = count_sst_formula(&shape);
        let n_a = BigUint::from(brute) << (w - a.ell());

        let closed_class = closed(g, &a)?;
        let pf_class = class_b_pfaffian(g, &a)?;
        let degree = closed_class.coeff() * BigRational::from_integer(factorial_int(w));

        let mut pass = true;
        let n_a_q = BigRational::from_integer(BigInt::from(n_a.clone()));
        if degree != n_a_q || degree.is_negative() {
            pass = false;
            fail("degree_vs_n_a", n_a_q.to_string(), degree.to_string());
        }
        if closed_class != pf_class {
            pass = false;
            fail("closed_vs_pfaffian", pf_class.to_string(), closed_class.to_string());
        }
        if formula != BigUint::from(brute) {
            pass = false;
            fail("sst_formula_vs_bruteforce", brute.to_string(), formula.to_string());
        }
        records.push(VerifyRecord {
            a: a.key(),
            g,
            weight: w,
            degree: degree.to_string(),
            n_a: n_a.to_string(),
            sst_formula: formula.to_string(),
            sst_bruteforce: brute,
            closed: closed_class.coeff().to_string(),
            pfaffian: pf_class.coeff().to_string(),
            pass,
        });
    }
    Ok(VerifyReport {
        max_weight,
        checked: records.len(),
        failures,
        records,
    })
}
