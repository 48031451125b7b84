//! Knot counts between a point or interval and a characteristic interval.

use crate::error::{Error, Result};

/// Counts knots of a partition (with multiplicity) between a target and a
/// fixed closed interval `J`.
#[derive(Debug, Clone)]
pub struct DistanceCounter<'a> {
    knots: &'a [f64],
    j: (f64, f64),
}

impl<'a> DistanceCounter<'a> {
    /// `knots` must be sorted.
    pub fn new(knots: &'a [f64], j: (f64, f64)) -> Self {
        DistanceCounter { knots, j }
    }

    fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Knots in the closed range `[lo, hi]`.
    fn count_closed(&self, lo: f64, hi: f64) -> usize {
        let a = self.knots.partition_point(|&t| t < lo);
        let b = self.knots.partition_point(|&t| t <= hi);
        b.saturating_sub(a)
    }

    /// Knots strictly between `x` and the nearer endpoint of `J`, plus that
    /// endpoint; 0 for `x` in `J`.
    pub fn d_point(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::DomainError(x));
        }
        let (a, b) = self.j;
        Ok(if x < a {
            self.count_closed(x, a) - self.count_closed(x, x)
        } else if x > b {
            self.count_closed(b, x) - self.count_closed(x, x)
        } else {
            0
        })
    }

    /// 0 when `V` meets `J`; otherwise the knots between them including
    /// knot-valued facing endpoints.
    pub fn d_interval(&self, v: (f64, f64)) -> Result<usize> {
        let (lo, hi) = self.domain();
        for x in [v.0, v.1] {
            if !(x >= lo && x <= hi) {
                return Err(Error::DomainError(x));
            }
        }
        if v.1 < v.0 {
            return Err(Error::EmptyInterval(v.0, v.1));
        }
        let (a, b) = self.j;
        Ok(if v.1 < a {
            self.count_closed(v.1, a)
        } else if v.0 > b {
            self.count_closed(b, v.0)
        } else {
            0
        })
    }
}
