//! Exact enumerative invariants of pointed Prym-Brill-Noether loci.
//!
//! Two routes are provided for every headline number: closed product
//! formulas, and an independent computation through Pfaffians of Schur Q
//! pair classes or through exhaustive tableau enumeration. All arithmetic is
//! exact.
//!
//! The ring and Pfaffian layers are generic over [`ExactScalar`]; the
//! aliases below fix the scalar to arbitrary-precision rationals, which is
//! what the domain API uses.

pub mod cache;
pub mod exactring;
pub mod pfaffian;
pub mod prym;
pub mod tableaux;

pub use exactring::{exp_scaled_xi, poincare_degree, ExactRingError, ExactScalar, TruncatedPoly};
pub use pfaffian::{class_b_pfaffian, pfaffian, q_entry, AntisymmetricMatrix, PfaffianError};
pub use prym::{
    beta, class_b_closed, degree_b, general_nonempty, n_a_bruteforce, n_a_formula, n_a_with,
    prym_tyurin_exponent, verify_identities, BruteForce, PrymClass, PrymError, ShapeCounter,
    VanishingSequence, VerifyReport,
};
pub use tableaux::{
    count_marked_unmarked_diagonal, count_sst_bruteforce, count_sst_formula, count_syt_staircase,
    enumerate_sst, render_tableau, shifted_diagram, ShiftedTableau, StrictPartition, TableauError,
    DEFAULT_ENUMERATION_BOUND,
};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational; panics on overflow, fine for small weights.
pub type SmallRational = num_rational::Rational64;
/// Wider fixed-width rational.
pub type WideRational = num_rational::Ratio<i128>;

/// `Q[xi]/(xi^N)` over arbitrary-precision rationals.
pub type Poly = TruncatedPoly<Rational>;
pub type SmallPoly = TruncatedPoly<SmallRational>;
pub type WidePoly = TruncatedPoly<WideRational>;

pub type Matrix = AntisymmetricMatrix<Rational>;
pub type SmallMatrix = AntisymmetricMatrix<SmallRational>;
