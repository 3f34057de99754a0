//! Exact multivariate polynomials in the coordinates `x1..x4`.

mod parse;
mod poly;
pub mod rational;

pub use parse::{parse, ParseError};
pub use poly::{Coord, EvalError, FloatPoly, Monomial, Point4, Poly4};
pub use rational::{format_rational, parse_rational, rat, Rational, RationalParseError};

#[cfg(test)]
mod proptests;
