//! Exact integer/rational arithmetic, polynomials and linear algebra.

pub mod arith;
pub mod cyclotomic;
pub mod matrix;
pub mod poly;

pub use cyclotomic::cyclotomic_poly;
pub use matrix::{det, solve_linear, RationalMatrix};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::{IntPolynomial, RatPolynomial};

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
