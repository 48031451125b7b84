//! Assembly and factorization of the B-spline Gram matrix.

use nalgebra::DMatrix;

use super::banded::{BandedCholesky, SymBanded};
use super::basis::BasisEvaluator;
use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};
use crate::knots::Partition;

/// Largest `M` for which the dense inverse is materialized.
pub const MAX_DENSE_INVERSE: usize = 20_000;

/// Gram matrix `a_ij = <N_i, N_j>` of a partition, its banded Cholesky
/// factor and, on request, the dense inverse `b_ij`.
#[derive(Debug, Clone)]
pub struct GramSystem {
    partition: Partition,
    band: SymBanded,
    factor: BandedCholesky,
    inverse: Option<DMatrix<f64>>,
}

/// Assembles the Gram matrix with `rule` applied on every knot interval.
///
/// The integrands have degree `2k - 2`, so any rule with `q >= k` nodes is
/// exact.
pub fn gram_matrix(partition: &Partition, rule: &QuadratureRule) -> Result<GramSystem> {
    let k = partition.order();
    if rule.len() < k {
        return Err(Error::QuadratureTooCoarse {
            nodes: rule.len(),
            order: k,
        });
    }
    let mut band = SymBanded::zeros(partition.dim(), k - 1);
    let mut ev = BasisEvaluator::new(k);
    for (mu, a, b) in partition.intervals() {
        let first = mu + 1 - k;
        for (x, w) in rule.on(a, b) {
            let v = ev.eval_in_span(partition, mu, x);
            for i in 0..k {
                let wi = w * v[i];
                for (j, vj) in v.iter().enumerate().skip(i) {
                    band.add(first + i, first + j, wi * vj);
                }
            }
        }
    }
    let factor = band.cholesky()?;
    Ok(GramSystem {
        partition: partition.clone(),
        band,
        factor,
        inverse: None,
    })
}

impl GramSystem {
    /// Gram system with the cheapest exact rule (`q = k`).
    pub fn new(partition: &Partition) -> Result<GramSystem> {
        gram_matrix(
            partition,
            &QuadratureRule::gauss_legendre(partition.order()),
        )
    }

    /// Same as [`GramSystem::new`] followed by [`GramSystem::materialize_inverse`].
    pub fn with_inverse(partition: &Partition) -> Result<GramSystem> {
        let mut g = GramSystem::new(partition)?;
        g.materialize_inverse()?;
        Ok(g)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.band.size()
    }

    pub fn band(&self) -> &SymBanded {
        &self.band
    }

    pub fn factor(&self) -> &BandedCholesky {
        &self.factor
    }

    /// `a_ij`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.band.get(i, j)
    }

    /// Computes the dense inverse column by column from the banded factor.
    pub fn materialize_inverse(&mut self) -> Result<()> {
        let m = self.dim();
        if m > MAX_DENSE_INVERSE {
            return Err(Error::InvalidParameter(format!(
                "dense inverse of size {m} exceeds {MAX_DENSE_INVERSE}"
            )));
        }
        let mut inv = DMatrix::zeros(m, m);
        for j in 0..m {
            let col = self.factor.inverse_column(j);
            inv.set_column(j, &nalgebra::DVector::from_vec(col));
        }
        // Symmetrize; both halves agree up to rounding.
        let inv = (&inv + inv.transpose()) * 0.5;
        self.inverse = Some(inv);
        Ok(())
    }

    pub fn inverse(&self) -> Result<&DMatrix<f64>> {
        self.inverse.as_ref().ok_or(Error::InverseNotAvailable)
    }

    /// Column `j` of the inverse, from the dense copy if present or by a
    /// banded solve.
    pub fn inverse_column(&self, j: usize) -> Vec<f64> {
        match &self.inverse {
            Some(inv) => inv.column(j).iter().copied().collect(),
            None => self.factor.inverse_column(j),
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.factor.solve(rhs)
    }

    /// `x^T A y`, i.e. the `L^2` inner product of two coefficient vectors.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.band.inner(x, y)
    }
}
