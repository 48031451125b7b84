//! Characteristic intervals of the orthonormal spline functions and the
//! combinatorics built on them: distance counters, monotone subsequences and
//! the multiplicity census of characteristic intervals inside a window.

pub mod census;
pub mod distance;
pub mod monotone;

pub use census::{census_sweep, char_multiplicity_census, CensusReport};
pub use distance::DistanceCounter;
pub use monotone::monotone_subsequence;

use serde::{Deserialize, Serialize};

use crate::bspline::spline::longest_subinterval;
use crate::error::{Error, Result};
use crate::knots::Partition;

/// Relative tolerance used to group ties among `|alpha_j|`.
pub const ALPHA_TIE_TOL: f64 = 1e-12;

/// Characteristic interval of one orthonormal spline function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharInterval {
    pub level: usize,
    /// Selected index `j0`.
    pub j0: usize,
    /// `[t_{j0}, t_{j0+k}]`.
    pub support: (f64, f64),
    /// Longest knot interval inside `support`, leftmost on ties.
    pub interval: (f64, f64),
    /// Indices whose support is at most twice the shortest one.
    pub lambda0: Vec<usize>,
    /// Indices of `lambda0` where `|alpha_j|` is maximal.
    pub lambda1: Vec<usize>,
}

impl CharInterval {
    pub fn len(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }
}

/// Selects `j0` and `J` for the function inserted at `knots[i0]`.
///
/// `alpha` holds `alpha_j` for `j = i0 - k, ..., i0`.
pub fn characteristic_interval(
    partition: &Partition,
    i0: usize,
    alpha: &[f64],
) -> Result<CharInterval> {
    let k = partition.order();
    let m = partition.dim();
    if i0 < k || i0 >= m {
        return Err(Error::IndexOutOfRange {
            index: i0,
            min: k,
            max: m.saturating_sub(1),
        });
    }
    if alpha.len() != k + 1 {
        return Err(Error::DimensionMismatch {
            expected: k + 1,
            found: alpha.len(),
        });
    }
    let first = i0 - k;
    let shortest = (first..=i0)
        .map(|j| partition.support_len(j))
        .fold(f64::INFINITY, f64::min);
    let lambda0: Vec<usize> = (first..=i0)
        .filter(|&j| partition.support_len(j) <= 2.0 * shortest)
        .collect();
    let peak = lambda0
        .iter()
        .map(|&j| alpha[j - first].abs())
        .fold(0.0, f64::max);
    let lambda1: Vec<usize> = lambda0
        .iter()
        .copied()
        .filter(|&j| alpha[j - first].abs() >= peak * (1.0 - ALPHA_TIE_TOL))
        .collect();
    let j0 = lambda1[0];
    Ok(CharInterval {
        level: partition.level(),
        j0,
        support: partition.support(j0),
        interval: longest_subinterval(partition, j0),
        lambda0,
        lambda1,
    })
}
