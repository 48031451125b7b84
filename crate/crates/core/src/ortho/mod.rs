//! The orthonormal spline system: the polynomial block followed by one
//! function `f_n` per inserted knot.

pub mod alpha;
pub mod function;
pub mod legendre;
pub mod oracle;
pub mod polynomial;
pub mod system;

pub use alpha::{alpha_coefficients, recursion_residuals};
pub use function::{abs_identity_defect, estwj_ratio, ortho_function, OrthoFunction};
pub use legendre::{function_lp_norm, legendre_projection, LocalPolynomial};
pub use oracle::gram_schmidt_oracle;
pub use polynomial::{initial_block, PolynomialBlock};
pub use system::{OrthoSystem, SystemEntry};
