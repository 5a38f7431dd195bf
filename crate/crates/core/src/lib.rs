//! Exact computations on points of the real spectrum of `ℚ[x_1, …, x_n]`.
//!
//! A point is given as a semi-curvette: the images of the coordinates in the
//! field of fractions of finite-support generalized power series
//! `ℚ[t^Γ]`, with `Γ = ℚ(√2)^m` ordered lexicographically, together with sign
//! data for the monomials `t^γ`. From that data the crate computes the
//! associated valuations, classifies coordinates into infinitesimal, finite
//! and infinite ones, moves points at infinity to finite points of a chart
//! by inverting the infinite coordinates, and checks the membership
//! correspondences between the resulting strata.
//!
//! The coefficient field is fixed to ℚ. Every quantity computed here only
//! needs an ordered field, and ℚ has a unique ordering, so all answers are
//! exact.

pub mod atlas;
pub mod chart;
pub mod error;
pub mod example;
pub mod hahn;
pub mod json;
pub mod lex;
pub mod linalg;
pub mod parse;
pub mod point;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use hahn::{HahnFraction, HahnPoly, SignData};
pub use lex::{ConvexSubgroup, LexVector, RelCanonicalForm};
pub use point::{Classification, Point, Value};
pub use poly::Polynomial;
pub use scalar::{QuadExt, Rat};
