//! Exact scalars: rationals, polynomials and rational functions in `t`.

mod parse;
mod poly;
mod ratfun;
mod scalar;

pub type Rational = num::BigRational;

pub use parse::{parse_ratfun, parse_rational};
pub use poly::Poly;
pub use ratfun::{format_rational, RatFun};
pub use scalar::{Local, Scalar, Valuation};
