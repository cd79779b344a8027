//! Independent ground truth for the generator.
//!
//! * [`enumerate_connected`] lists every connected multigraph of a cell by
//!   exhaustive search and weights it by a symmetry factor counted directly
//!   over joint vertex and edge-end renumberings.
//! * [`zero_dim_log_z`] expands `log Z(j)` of a zero-dimensional field theory
//!   as a formal power series, giving the connected n-point coefficients
//!   without any graphs.

mod compare;
mod enumerate;
mod series;

pub use compare::{compare_scalars, compare_sums, CompareReport, GraphDiff, ScalarComparison};
pub use enumerate::{
    brute_force_edge_symmetry_factor, brute_force_symmetry_factor, connected_multigraphs, enumerate_connected,
    enumerate_connected_with_limit, DEFAULT_ENUMERATION_LIMIT,
};
pub use series::{count_perfect_matchings, double_factorial, gaussian_moment, zero_dim_log_z, SeriesTable};
