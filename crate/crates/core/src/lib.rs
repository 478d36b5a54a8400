//! Exact construction and verification of q-Krall orthogonal polynomials.
//!
//! The crate builds new orthogonal families from the q-Meixner and
//! q-Laguerre polynomials by the D-operator method, produces the higher
//! order q-difference operators that have them as eigenfunctions, and
//! checks every identity with exact rational arithmetic.

pub mod config;
pub mod dop;
pub mod error;
pub mod exact;
pub mod families;
pub mod krall;
pub mod linalg;
pub mod moments;
pub mod qdiff;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use exact::{Poly, Rational, RationalFn};
pub use qdiff::QDiffOperator;
