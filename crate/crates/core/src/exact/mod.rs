//! Exact arithmetic substrate: rationals, polynomials, rational functions
//! and the q-Pochhammer symbol.

pub mod pochhammer;
pub mod poly;
pub mod ratfn;
pub mod rational;

pub use pochhammer::qpochhammer;
pub use poly::Poly;
pub use ratfn::RationalFn;
pub use rational::{format_rational, int, parse_rational, pow, rat, Rational};
