//! Orthonormal spline systems of arbitrary order on arbitrary admissible
//! knot sequences.
//!
//! The crate builds, for a point sequence `(t_n)` in `[0, 1]` and an order
//! `k`, the functions `f_n` that span the orthogonal complement of the
//! level-`(n - 1)` spline space inside the level-`n` space, together with
//! the machinery needed to study them: B-spline Gram matrices and their
//! inverses, characteristic intervals, square and maximal functions.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bspline;
pub mod charint;
pub mod error;
pub mod gram;
pub mod knots;
pub mod ortho;

pub use error::{Error, Result};
pub use knots::{
    insert_event, partition_at, random_admissible, validate_admissible, GeneratorParams,
    InsertEvent, KnotSequence, Law, Partition,
};
pub use ortho::{OrthoFunction, OrthoSystem};
