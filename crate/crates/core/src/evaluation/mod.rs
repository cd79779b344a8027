//! Finite-model Feynman rules and connected n-point values.

mod model;
mod scalar;
mod sigma;

pub use model::{AnyModel, Model};
pub use scalar::{Scalar, FLOAT_TOLERANCE};
pub use sigma::{evaluate_graph, evaluate_sum, leg_monomial, sigma_lv, sigma_lv_with, sigma_recursive, SigmaRecursion};
