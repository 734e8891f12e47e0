//! Weighted matching polynomials and graph continued fractions in exact
//! rational arithmetic.
//!
//! The crate computes the matching polynomial of a graph with vertex weights
//! `x - r_i` and non-positive edge weights, isolates its real roots, sorts
//! the vertices into the sign classes `-`, `0`, `+`, `inf` of their graph
//! continued fractions at any root, and builds the refined Gallai-Edmonds
//! decomposition from those classes. Every structural identity used along
//! the way has a `*_check` function that verifies it on a concrete instance.
//!
//! Polynomial and graph types are generic over [`Scalar`]; root isolation,
//! multiplicities and all checks work over [`Rational`].

pub mod bounds;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod graph;
pub mod matchpoly;
pub mod oracle;
pub mod pathtree;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod verdict;

pub use error::{Error, Result};
pub use exact::{AlgebraicNumber, Interval, Polynomial};
pub use graph::{VertexSet, WeightedGraph};
pub use scalar::Scalar;
pub use verdict::Verdict;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;
pub type RatPoly = Polynomial<Rational>;
pub type RatGraph = WeightedGraph<Rational>;

pub type F64Poly = Polynomial<f64>;
pub type F64Graph = WeightedGraph<f64>;
