//! Coefficients `a_n = <f, f_n>`.

use serde::{Deserialize, Serialize};

use crate::bspline::{embed, QuadratureRule, Spline};
use crate::error::{Error, Result};
use crate::ortho::OrthoSystem;

/// `f ~ sum_m coeffs[m] f_m`, by system position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub coeffs: Vec<f64>,
}

impl Expansion {
    pub fn new(coeffs: Vec<f64>) -> Expansion {
        Expansion { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum a_m^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum()
    }

    /// `sum a_m f_m` over the finest partition.
    pub fn reconstruct(&self, system: &OrthoSystem) -> Result<Spline> {
        system.combine(&self.coeffs)
    }

    /// Coefficients multiplied entrywise by signs.
    pub fn flipped(&self, eps: &[f64]) -> Expansion {
        Expansion::new(self.coeffs.iter().zip(eps).map(|(a, e)| a * e).collect())
    }
}

/// Gauss nodes per knot interval when expanding a general function.
pub const EXPAND_NODES: usize = 12;

/// `a_m = int f f_m` by Gauss quadrature on each knot interval of the finest
/// partition.
pub fn expand(f: impl Fn(f64) -> f64, system: &OrthoSystem) -> Expansion {
    let rule = QuadratureRule::gauss_legendre(EXPAND_NODES.max(system.order() + 2));
    let part = system.partition();
    let mut ev = crate::bspline::BasisEvaluator::new(system.order());
    let mut row = vec![0.0; system.len()];
    let mut coeffs = vec![0.0; system.len()];
    for (mu, a, b) in part.intervals() {
        for (x, w) in rule.on(a, b) {
            let fx = f(x) * w;
            system.values_in_span(&mut ev, mu, x, &mut row);
            for (c, v) in coeffs.iter_mut().zip(&row) {
                *c += fx * v;
            }
        }
    }
    Expansion::new(coeffs)
}

/// Exact coefficients of a spline whose knots are contained in the finest
/// partition: `a_m = c_m^T A c_f`.
pub fn expand_spline(f: &Spline, system: &OrthoSystem) -> Result<Expansion> {
    if f.order() != system.order() {
        return Err(Error::InvalidOrder);
    }
    let lifted = embed(f, system.partition())?;
    let af = system.gram()?.band().mul_vec(lifted.coeffs());
    Ok(Expansion::new(
        (0..system.len())
            .map(|m| system.coeffs(m).iter().zip(&af).map(|(c, v)| c * v).sum())
            .collect(),
    ))
}
