//! Exact rational scalars, dense matrices and a certificate-producing
//! feasibility solver. Nothing in this crate ever touches floating point.

mod lp;
mod matrix;
mod rational;

pub use lp::{
    check_certificate, check_witness, lp_feasible, LinearConstraint, LpError, LpOutcome, Relation,
};
pub use matrix::{Matrix, MatrixError};
pub use rational::{common_denominator, parse_rational, rat, ratio, Rational};
