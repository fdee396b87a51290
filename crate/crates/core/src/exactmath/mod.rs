//! Exact arithmetic: rationals, sparse multivariate polynomials over named
//! variables, and checkers for polynomial identities and nonnegative
//! combinations.
//!
//! Nothing in this module touches floating point. Polynomials carry the
//! [`VarContext`] they were built in; mixing contexts is an error (or a
//! panic for the operator overloads).

mod combination;
mod eval;
mod poly;
pub mod serde_text;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

pub use combination::{check_nonneg_combination, CombinationCheck, Generator, NonnegCombination, Part};
pub use eval::GridEvaluator;
pub use poly::{Monomial, Polynomial, VarContext};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("polynomials belong to different variable contexts ({left} vs {right})")]
    ContextMismatch { left: u64, right: u64 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}` in context")]
    DuplicateVariable(String),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
}

/// `poly_equal`: true iff `p - q` expands to the zero polynomial.
pub fn poly_equal(p: &Polynomial, q: &Polynomial) -> Result<bool, ExactError> {
    p.same_context(q)?;
    Ok(p == q)
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
