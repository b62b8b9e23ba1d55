//! Exact rational arithmetic, polynomials in one or two variables,
//! continuous piecewise polynomials, small dense linear algebra and an
//! exact simplex solver.

pub mod linalg;
pub mod lp;
pub mod piecewise;
pub mod poly;
pub mod rational;

use thiserror::Error;

pub use piecewise::{rational_roots_in_interval, C1Record, Piece, PiecewisePolynomial};
pub use poly::Polynomial;
pub use rational::{fmt_rational, int, parse_rational, rat, Rational};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("interval [{a}, {b}] exceeds domain [{lo}, {hi}]")]
    Domain {
        a: String,
        b: String,
        lo: String,
        hi: String,
    },
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("pieces do not abut: {left} vs {right}")]
    Gap { left: String, right: String },
    #[error("discontinuity at {at}: left value {left}, right value {right}")]
    Discontinuous {
        at: String,
        left: String,
        right: String,
    },
    #[error("chamber wall {poly} has an irrational root in [{lo}, {hi}]")]
    IrrationalWall { poly: String, lo: String, hi: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
