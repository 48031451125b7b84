//! Coefficients `alpha_j` of the new orthogonal function in the dual basis.

use crate::error::{Error, Result};
use crate::knots::Partition;

/// `alpha_j` for `j = i0 - k, ..., i0` (returned at offsets `0..=k`).
///
/// `alpha_j = (-1)^{j - i0 + k} prod_{l=i0-k+1}^{j-1} (t_{i0} - t_l) / (t_{l+k} - t_l)
///            * prod_{l=j+1}^{i0-1} (t_{l+k} - t_{i0}) / (t_{l+k} - t_l)`,
/// normalized so that `alpha_{i0-k} > 0` and `|alpha_j| <= 1`.
pub fn alpha_coefficients(partition: &Partition, i0: usize) -> Result<Vec<f64>> {
    let k = partition.order();
    let m = partition.dim();
    if i0 < k || i0 >= m {
        return Err(Error::IndexOutOfRange {
            index: i0,
            min: k,
            max: m.saturating_sub(1),
        });
    }
    let t = partition.knots();
    let ti = t[i0];
    let left = |l: usize| (ti - t[l]) / (t[l + k] - t[l]);
    let right = |l: usize| (t[l + k] - ti) / (t[l + k] - t[l]);
    let first = i0 - k;
    Ok((first..=i0)
        .map(|j| {
            let lp: f64 = (first + 1..j).map(left).product();
            let rp: f64 = (j + 1..i0).map(right).product();
            let sign = if (j - first).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * lp * rp
        })
        .collect())
}

/// Residuals of the two-term recursion
/// `alpha_{i+1} (t_{i+k+1} - t_{i0}) / (t_{i+k+1} - t_{i+1}) + alpha_i (t_{i0} - t_i) / (t_{i+k} - t_i)`
/// for `i = i0 - k, ..., i0 - 1`; all vanish for the true coefficients.
pub fn recursion_residuals(partition: &Partition, i0: usize, alpha: &[f64]) -> Vec<f64> {
    let k = partition.order();
    let t = partition.knots();
    let first = i0 - k;
    (first..i0)
        .map(|i| {
            let a = alpha[i - first];
            let b = alpha[i + 1 - first];
            b * (t[i + k + 1] - t[i0]) / (t[i + k + 1] - t[i + 1])
                + a * (t[i0] - t[i]) / (t[i + k] - t[i])
        })
        .collect()
}
