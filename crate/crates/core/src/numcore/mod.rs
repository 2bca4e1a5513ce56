//! Exact-arithmetic kernel shared by every other module.
//!
//! Terms are arbitrary-precision integers and nothing in the crate ever
//! rounds them. Rational values (Bernoulli numbers, transform outputs, model
//! coefficients) are reduced fractions with a positive denominator.

mod arith;
mod encode;
mod precision;
mod primes;

pub use arith::{
    binomial_coefficient, divisor_sigma, divisors, gcd, isqrt, moebius_mu, nim_sum,
};
pub use encode::{
    canonical_match_text, flatten_square_by_antidiagonals, flatten_triangle_by_rows,
    link_rationals, parse_match_text, EncodeError,
};
pub use precision::{HighPrecisionValue, PrecisionError};
pub use primes::{
    factorize, factorize_with, is_prime, nth_prime, primality, primes_up_to, Certainty,
    FactorEffort, FactorError, Factorization, Primality, DETERMINISTIC_PRIMALITY_BOUND,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// A single sequence term.
pub type Term = BigInt;

/// A reduced fraction with a strictly positive denominator. `BigRational`
/// normalizes on construction, which is exactly the stored-pair invariant.
pub type RationalPair = BigRational;

/// A finite run of terms; `offset` is the index of `terms[0]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermList {
    pub offset: i64,
    pub terms: Vec<Term>,
}

impl TermList {
    pub fn new(offset: i64, terms: Vec<Term>) -> Self {
        TermList { offset, terms }
    }

    pub fn from_i64s(offset: i64, values: &[i64]) -> Self {
        TermList {
            offset,
            terms: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The sequence index of the `i`-th stored term.
    pub fn index_of(&self, i: usize) -> i64 {
        self.offset + i as i64
    }

    pub fn as_slice(&self) -> &[Term] {
        &self.terms
    }

    /// Canonical comma-separated text of the terms.
    pub fn match_text(&self) -> String {
        canonical_match_text(&self.terms)
    }
}

impl std::fmt::Display for TermList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.match_text())
    }
}
