//! One-knot refinement of B-spline bases (Böhm's insertion formula).

use super::spline::Spline;
use crate::error::{Error, Result};
use crate::knots::Partition;

/// Coarse B-splines written in terms of the fine B-splines after one knot
/// insertion: `coarse_i = sum_{(j, w) in rows[i]} w * fine_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementMap {
    pub coarse: Partition,
    pub fine: Partition,
    pub i0: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
}

/// Two insertion weights for coarse index `i` with `i0 - k <= i <= i0 - 1`,
/// read off the fine knot vector `t`.
fn insertion_weights(t: &[f64], k: usize, i0: usize, i: usize) -> (f64, f64) {
    let left = (t[i0] - t[i]) / (t[i + k] - t[i]);
    let right = (t[i + k + 1] - t[i0]) / (t[i + k + 1] - t[i + 1]);
    (left, right)
}

/// Refinement rows for `fine = coarse + {fine.knots()[i0]}`.
///
/// Indices `i <= i0 - k - 1` map to themselves, `i0 - k <= i <= i0 - 1`
/// become two-term convex combinations and `i >= i0` shift by one.
pub fn boehm_refine(coarse: &Partition, fine: &Partition, i0: usize) -> Result<RefinementMap> {
    let k = coarse.order();
    if fine.order() != k
        || fine.dim() != coarse.dim() + 1
        || i0 < k
        || i0 >= fine.dim()
        || fine.without_knot(i0).ok().as_ref() != Some(coarse)
    {
        return Err(Error::PartitionMismatch(i0));
    }
    let t = fine.knots();
    let rows = (0..coarse.dim())
        .map(|i| {
            if i + k < i0 {
                vec![(i, 1.0)]
            } else if i < i0 {
                let (l, r) = insertion_weights(t, k, i0, i);
                vec![(i, l), (i + 1, r)]
            } else {
                vec![(i + 1, 1.0)]
            }
        })
        .collect();
    Ok(RefinementMap {
        coarse: coarse.clone(),
        fine: fine.clone(),
        i0,
        rows,
    })
}

impl RefinementMap {
    /// Fine coefficients of the spline with coarse coefficients `coarse`.
    pub fn apply(&self, coarse: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.fine.dim()];
        for (c, row) in coarse.iter().zip(&self.rows) {
            for &(j, w) in row {
                out[j] += c * w;
            }
        }
        out
    }

    /// Dense `(M - 1) x M` matrix of the rows.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut r = vec![0.0; self.fine.dim()];
                for &(j, w) in row {
                    r[j] = w;
                }
                r
            })
            .collect()
    }
}

/// Inserts `x` into `knots` (after equal knots) and updates `coeffs` so the
/// represented spline is unchanged.
pub fn insert_knot_in_place(k: usize, knots: &mut Vec<f64>, coeffs: &mut Vec<f64>, x: f64) {
    let i0 = knots.partition_point(|&t| t <= x);
    knots.insert(i0, x);
    // coarse index i in [i0 - k, i0 - 1] spreads onto fine i and i + 1
    let lo = i0 - k;
    let old: Vec<f64> = coeffs[lo..i0].to_vec();
    coeffs.insert(i0, 0.0);
    for j in lo..=i0 {
        let mut c = 0.0;
        if j < i0 {
            c += old[j - lo] * insertion_weights(knots, k, i0, j).0;
        }
        if j > lo {
            c += old[j - 1 - lo] * insertion_weights(knots, k, i0, j - 1).1;
        }
        coeffs[j] = c;
    }
}

/// Re-expresses `f` over `target`, whose knot multiset must contain that of
/// `f`'s partition.
pub fn embed(f: &Spline, target: &Partition) -> Result<Spline> {
    let k = f.order();
    let src = f.partition();
    if target.order() != k || target.domain() != src.domain() {
        return Err(Error::InvalidKnots(
            "target partition has a different order or domain".into(),
        ));
    }
    let mut knots = src.knots().to_vec();
    let mut coeffs = f.coeffs().to_vec();
    let extra = multiset_difference(target.knots(), src.knots())
        .ok_or_else(|| Error::InvalidKnots("target does not refine the source partition".into()))?;
    for x in extra {
        insert_knot_in_place(k, &mut knots, &mut coeffs, x);
    }
    Spline::new(target.clone(), coeffs)
}

/// `big - small` as multisets of sorted values, or `None` if `small` is not
/// contained in `big`.
fn multiset_difference(big: &[f64], small: &[f64]) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(big.len().saturating_sub(small.len()));
    let mut j = 0;
    for &x in big {
        if j < small.len() && small[j] == x {
            j += 1;
        } else {
            out.push(x);
        }
    }
    (j == small.len()).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::basis::eval_basis;
    use approx::assert_abs_diff_eq;

    fn part(k: usize, knots: &[f64]) -> Partition {
        Partition::from_knots(k, knots.to_vec()).unwrap()
    }

    #[test]
    fn indicator_refinement() {
        let m = boehm_refine(&part(1, &[0.0, 1.0]), &part(1, &[0.0, 0.5, 1.0]), 1).unwrap();
        assert_eq!(m.rows, vec![vec![(0, 1.0), (1, 1.0)]]);
    }

    #[test]
    fn hat_refinement() {
        let m = boehm_refine(
            &part(2, &[0.0, 0.0, 1.0, 1.0]),
            &part(2, &[0.0, 0.0, 0.5, 1.0, 1.0]),
            2,
        )
        .unwrap();
        assert_eq!(m.rows[0], vec![(0, 1.0), (1, 0.5)]);
        assert_eq!(m.rows[1], vec![(1, 0.5), (2, 1.0)]);
    }

    #[test]
    fn mismatch_is_rejected() {
        let coarse = part(2, &[0.0, 0.0, 1.0, 1.0]);
        let fine = part(2, &[0.0, 0.0, 0.5, 1.0, 1.0]);
        assert_eq!(
            boehm_refine(&coarse, &fine, 3),
            Err(Error::PartitionMismatch(3))
        );
        let other = part(2, &[0.0, 0.0, 0.25, 0.5, 1.0, 1.0]);
        assert!(boehm_refine(&coarse, &other, 2).is_err());
    }

    #[test]
    fn in_place_insertion_matches_map() {
        let k = 3;
        let coarse = part(k, &[0.0, 0.0, 0.0, 0.2, 0.6, 0.6, 1.0, 1.0, 1.0]);
        let coeffs = vec![1.0, -2.0, 0.5, 3.0, -1.0, 2.0];
        for x in [0.1, 0.2, 0.4, 0.6, 0.9] {
            let (fine, i0) = coarse.with_knot(x).unwrap_or_else(|_| panic!("{x}"));
            if fine.knots().windows(k + 1).any(|w| w[0] == w[k]) {
                continue;
            }
            let map = boehm_refine(&coarse, &fine, i0).unwrap();
            let mut knots = coarse.knots().to_vec();
            let mut c = coeffs.clone();
            insert_knot_in_place(k, &mut knots, &mut c, x);
            assert_eq!(knots, fine.knots());
            let want = map.apply(&coeffs);
            for (a, b) in c.iter().zip(&want) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn embed_preserves_values() {
        let coarse = part(2, &[0.0, 0.0, 0.5, 1.0, 1.0]);
        let f = Spline::new(coarse, vec![1.0, -1.0, 2.0]).unwrap();
        let target = part(2, &[0.0, 0.0, 0.1, 0.5, 0.7, 0.7, 1.0, 1.0]);
        let g = embed(&f, &target).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert_abs_diff_eq!(f.eval(x).unwrap(), g.eval(x).unwrap(), epsilon = 1e-14);
        }
        assert!(embed(&g, f.partition()).is_err());
    }

    #[test]
    fn rows_reproduce_coarse_basis() {
        let coarse = part(3, &[0.0, 0.0, 0.0, 0.3, 0.5, 1.0, 1.0, 1.0]);
        let (fine, i0) = coarse.with_knot(0.4).unwrap();
        let map = boehm_refine(&coarse, &fine, i0).unwrap();
        for s in 0..=200 {
            let x = s as f64 / 200.0;
            let (cf, cv) = eval_basis(&coarse, x).unwrap();
            let (ff, fv) = eval_basis(&fine, x).unwrap();
            for (i, row) in map.rows.iter().enumerate() {
                let direct = if i >= cf && i < cf + cv.len() {
                    cv[i - cf]
                } else {
                    0.0
                };
                let via: f64 = row
                    .iter()
                    .map(|&(j, w)| {
                        if j >= ff && j < ff + fv.len() {
                            w * fv[j - ff]
                        } else {
                            0.0
                        }
                    })
                    .sum();
                assert_abs_diff_eq!(direct, via, epsilon = 1e-14);
            }
        }
    }
}
