//! B-spline evaluation by the triangular Cox–de Boor recursion.

use crate::error::Result;
use crate::knots::Partition;

/// Reusable scratch space for evaluating the `k` nonzero B-splines at a point.
#[derive(Debug, Clone)]
pub struct BasisEvaluator {
    left: Vec<f64>,
    right: Vec<f64>,
    values: Vec<f64>,
}

impl BasisEvaluator {
    pub fn new(order: usize) -> Self {
        BasisEvaluator {
            left: vec![0.0; order],
            right: vec![0.0; order],
            values: vec![0.0; order],
        }
    }

    /// Values of `N_{mu-k+1}, ..., N_mu` at `x`, where `mu` is the knot
    /// interval index of `x` (see [`Partition::span_index`]).
    pub fn eval_in_span(&mut self, partition: &Partition, mu: usize, x: f64) -> &[f64] {
        let k = partition.order();
        let t = partition.knots();
        if self.values.len() != k {
            *self = BasisEvaluator::new(k);
        }
        self.values[0] = 1.0;
        for j in 1..k {
            self.left[j] = x - t[mu + 1 - j];
            self.right[j] = t[mu + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = self.values[r] / (self.right[r + 1] + self.left[j - r]);
                self.values[r] = saved + self.right[r + 1] * temp;
                saved = self.left[j - r] * temp;
            }
            self.values[j] = saved;
        }
        &self.values
    }

    /// First nonzero index and the nonzero B-spline values at `x`.
    pub fn eval(&mut self, partition: &Partition, x: f64) -> Result<(usize, &[f64])> {
        let mu = partition.span_index(x)?;
        let first = mu + 1 - partition.order();
        Ok((first, self.eval_in_span(partition, mu, x)))
    }
}

/// The at most `k` nonzero B-splines at `x` as `(first_index, values)`.
///
/// Values are nonnegative and sum to one. Evaluation is right-continuous at
/// interior knots and left-continuous at the right end of the domain.
pub fn eval_basis(partition: &Partition, x: f64) -> Result<(usize, Vec<f64>)> {
    let mut ev = BasisEvaluator::new(partition.order());
    let (first, values) = ev.eval(partition, x)?;
    Ok((first, values.to_vec()))
}

/// Value of the single B-spline `j` at `x`.
pub fn eval_single(partition: &Partition, j: usize, x: f64) -> Result<f64> {
    let (first, values) = eval_basis(partition, x)?;
    Ok(if j >= first && j < first + values.len() {
        values[j - first]
    } else {
        0.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use approx::assert_abs_diff_eq;

    fn part(k: usize, knots: &[f64]) -> Partition {
        Partition::from_knots(k, knots.to_vec()).unwrap()
    }

    #[test]
    fn indicator_basis() {
        let p = part(1, &[0.0, 0.5, 1.0]);
        assert_eq!(eval_basis(&p, 0.25).unwrap(), (0, vec![1.0]));
        assert_eq!(eval_basis(&p, 0.5).unwrap(), (1, vec![1.0]));
        assert_eq!(eval_basis(&p, 1.0).unwrap(), (1, vec![1.0]));
    }

    #[test]
    fn hat_functions() {
        let p = part(2, &[0.0, 0.0, 0.5, 1.0, 1.0]);
        assert_abs_diff_eq!(eval_single(&p, 1, 0.5).unwrap(), 1.0);
        assert_abs_diff_eq!(eval_single(&p, 0, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(eval_single(&p, 2, 0.5).unwrap(), 0.0);
        let (first, v) = eval_basis(&p, 0.75).unwrap();
        assert_eq!(first, 1);
        assert_abs_diff_eq!(v[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn bernstein_on_boundary_only_knots() {
        // k = 3, no interior knots: quadratic Bernstein polynomials
        let p = part(3, &[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let x: f64 = 0.3;
        let (first, v) = eval_basis(&p, x).unwrap();
        assert_eq!(first, 0);
        assert_abs_diff_eq!(v[0], (1.0 - x).powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 2.0 * x * (1.0 - x), epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], x * x, epsilon = 1e-15);
    }

    #[test]
    fn right_continuity_at_full_multiplicity_knot() {
        // k = 2 with a double interior knot: the basis jumps at 0.5
        let p = part(2, &[0.0, 0.0, 0.5, 0.5, 1.0, 1.0]);
        assert_abs_diff_eq!(
            eval_single(&p, 1, 0.5 - 1e-12).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(eval_single(&p, 1, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(eval_single(&p, 2, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn domain_error() {
        let p = part(2, &[0.0, 0.0, 1.0, 1.0]);
        assert_eq!(eval_basis(&p, -0.1), Err(Error::DomainError(-0.1)));
    }
}
