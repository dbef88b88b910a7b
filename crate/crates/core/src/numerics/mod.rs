//! Special functions and deterministic adaptive quadrature shared by every
//! formula evaluator.

mod quadrature;
pub(crate) mod special;

pub use quadrature::{integrate_1d, integrate_body, integrate_graph_region, Estimate, QuadratureRule};
pub use special::{log_beta, log_factorial, log_gamma};
