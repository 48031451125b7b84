//! Brute-force Gram–Schmidt construction of `f_n`, used as an independent
//! check on [`ortho_function`](super::ortho_function).

use nalgebra::{DMatrix, DVector};

use crate::bspline::{boehm_refine, GramSystem, Spline};
use crate::error::{Error, Result};
use crate::knots::{insert_event, partition_at, KnotSequence};

/// `f_n` by dense projection: every fine B-spline `N_j`, `j = i0 - k..=i0`,
/// has its projection onto the refined coarse space removed, the residual
/// of largest norm is normalized, and its sign is fixed so that
/// `<f_n, N_{i0-k}> > 0`.
pub fn gram_schmidt_oracle(seq: &KnotSequence, n: usize) -> Result<Spline> {
    if n < 2 {
        return Err(Error::LevelOutOfRange {
            level: n,
            min: 2,
            max: seq.max_level(),
        });
    }
    let fine = partition_at(seq, n)?;
    let coarse = partition_at(seq, n - 1)?;
    let i0 = insert_event(seq, n)?.i0;
    let k = fine.order();
    let m = fine.dim();
    let g = GramSystem::new(&fine)?;
    let a = DMatrix::from_fn(m, m, |i, j| g.entry(i, j));
    let rows = boehm_refine(&coarse, &fine, i0)?.to_dense();
    let r = DMatrix::from_fn(m - 1, m, |i, j| rows[i][j]);
    let ra = &r * &a;
    let c = &ra * r.transpose();
    let chol = c.cholesky().ok_or(Error::NotPositiveDefinite(0))?;

    let mut best: Option<(f64, DVector<f64>)> = None;
    for j in i0 - k..=i0 {
        let proj = chol.solve(&ra.column(j).into_owned());
        let mut v = -(r.transpose() * proj);
        v[j] += 1.0;
        let sq = v.dot(&(&a * &v));
        if best.as_ref().is_none_or(|(s, _)| sq > *s) {
            best = Some((sq, v));
        }
    }
    let (sq, mut v) = best.expect("k + 1 candidates");
    v /= sq.sqrt();
    if (&a * &v)[i0 - k] < 0.0 {
        v = -v;
    }
    Spline::new(fine, v.iter().copied().collect())
}
