//! B-spline bases over a partition: evaluation, quadrature, Gram matrices,
//! norms and knot insertion.

pub mod banded;
pub mod basis;
pub mod gram_system;
pub mod quadrature;
pub mod refine;
pub mod spline;

pub use banded::{BandedCholesky, SymBanded};
pub use basis::{eval_basis, eval_single, BasisEvaluator};
pub use gram_system::{gram_matrix, GramSystem};
pub use quadrature::QuadratureRule;
pub use refine::{boehm_refine, embed, RefinementMap};
pub use spline::{deboor_stability_ratio, lp_norm, Spline, StabilityRatio};
