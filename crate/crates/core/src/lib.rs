//! Recursive generation of connected Feynman graphs with exact weights.
//!
//! Graphs are built in an algebraic representation: a graph with `v`
//! vertices is a term of `S(V)^{⊗v}`, each tensor slot holding the field
//! operators attached to one vertex. Two graph-building operators act on
//! weighted sums of such terms:
//!
//! * `T_i` attaches a self-loop at vertex `i` with a factor `1/2`;
//! * `Q_i` splits vertex `i` through the coproduct of the symmetric algebra
//!   and reconnects both halves with a new edge, again with a factor `1/2`.
//!
//! The recursion
//!
//! ```text
//! Ω^{0,1} = id
//! Ω^{l,v} = 1/(l+v-1) · ( Σ_i Q_i ∘ Ω^{l,v-1} + Σ_i T_i ∘ Ω^{l-1,v} )
//! ```
//!
//! produces every connected graph with `l` loops and `v` vertices exactly
//! once per vertex ordering, and after forgetting the vertex order each graph
//! carries the weight `1/S`, the inverse of its symmetry factor.
//!
//! Modules:
//!
//! * [`algebra`]: monomials, tensor sums and the (iterated, truncated) coproduct.
//! * [`graphs`]: vertex-ordered multigraphs, canonical forms, symmetry factors.
//! * [`recursion`]: `T_i`, `Q_i`, the memoized generator and the alternative
//!   two-factor recursion.
//! * [`evaluation`]: finite models, vertex functions and connected n-point values.
//! * [`oracle`]: brute-force enumeration and the zero-dimensional series oracle.
//! * [`verify`]: the verification suites behind `hopfloop verify`.
//! * [`cli`]: the `hopfloop` command-line front-end.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod graphs;
pub mod oracle;
pub mod recursion;
pub mod verify;

pub use algebra::{Label, Monomial, Rational, TensorTerm, WeightedTensorSum};
pub use error::{Error, Result};
pub use evaluation::{AnyModel, Model, Scalar};
pub use graphs::{CanonicalGraph, OrderedGraph};
pub use recursion::{GenOptions, Generator, GraphSum};
