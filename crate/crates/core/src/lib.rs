//! Numerical evaluation of the C-transfinite diameter `δ_C(K)` of compact sets
//! `K ⊂ ℂ²`, where the polynomial degree is measured by a body `C` in the
//! positive quadrant.
//!
//! Four independent routes are provided so that each can check the others:
//!
//! * [`vandermonde`]: Fekete-type maximization of monomial Vandermonde
//!   determinants (the definition itself, at finite `n`),
//! * [`formulas::delta_chebyshev`]: the geometric mean of directional
//!   Chebyshev constants over `C`,
//! * [`formulas::delta_product_triangle`] / [`formulas::delta_product_general`]:
//!   closed forms for product sets `E × F`,
//! * [`formulas::delta_ball_beta`] / [`formulas::delta_ball_gamma`] and
//!   [`vandermonde::delta_ball_qn`]: Beta/Gamma closed forms and orthogonal
//!   monomial asymptotics for the Euclidean unit ball.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bodies;
pub mod compacta;
mod error;
pub mod formulas;
mod linalg;
pub mod numerics;
pub mod vandermonde;

pub use error::{Error, Result};
