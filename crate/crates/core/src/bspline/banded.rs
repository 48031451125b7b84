//! Symmetric banded matrices and their Cholesky factorization.

use crate::error::{Error, Result};

/// Symmetric matrix with `bandwidth` nonzero sub-diagonals, stored by
/// diagonal: `diags[d][i] = a[i + d][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBanded {
    n: usize,
    diags: Vec<Vec<f64>>,
}

impl SymBanded {
    pub fn zeros(n: usize, bandwidth: usize) -> SymBanded {
        let diags = (0..=bandwidth)
            .map(|d| vec![0.0; n.saturating_sub(d)])
            .collect();
        SymBanded { n, diags }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.diags.len() - 1
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth() {
            0.0
        } else {
            self.diags[d][lo]
        }
    }

    /// Adds `v` to entry `(i, j)` (and, implicitly, `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.diags[hi - lo][lo] += v;
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.diags[0].iter().zip(x).map(|(a, b)| a * b).collect();
        for (d, diag) in self.diags.iter().enumerate().skip(1) {
            for (i, &a) in diag.iter().enumerate() {
                y[i + d] += a * x[i];
                y[i] += a * x[i + d];
            }
        }
        y
    }

    /// `x^T A y`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mul_vec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn cholesky(&self) -> Result<BandedCholesky> {
        BandedCholesky::factor(self)
    }
}

/// Lower-triangular banded factor `L` with `A = L L^T`, stored like
/// [`SymBanded`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    diags: Vec<Vec<f64>>,
}

impl BandedCholesky {
    fn factor(a: &SymBanded) -> Result<BandedCholesky> {
        let n = a.n;
        let bw = a.bandwidth();
        let mut l = SymBanded::zeros(n, bw).diags;
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut s = a.diags[0][j];
            for p in lo..j {
                let v = l[j - p][p];
                s -= v * v;
            }
            if !(s > 0.0) {
                return Err(Error::NotPositiveDefinite(j));
            }
            let ljj = s.sqrt();
            l[0][j] = ljj;
            for i in j + 1..n.min(j + bw + 1) {
                let mut s = a.diags[i - j][j];
                for p in i.saturating_sub(bw)..j {
                    s -= l[i - p][p] * l[j - p][p];
                }
                l[i - j][j] = s / ljj;
            }
        }
        Ok(BandedCholesky { n, bw, diags: l })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, bw, l) = (self.n, self.bw, &self.diags);
        for i in 0..n {
            let mut s = b[i];
            for p in i.saturating_sub(bw)..i {
                s -= l[i - p][p] * b[p];
            }
            b[i] = s / l[0][i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for p in i + 1..n.min(i + bw + 1) {
                s -= l[p - i][i] * b[p];
            }
            b[i] = s / l[0][i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Column `j` of `A^{-1}`.
    pub fn inverse_column(&self, j: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.n];
        e[j] = 1.0;
        self.solve_in_place(&mut e);
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tridiag(n: usize, diag: f64, off: f64) -> SymBanded {
        let mut a = SymBanded::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, diag);
            if i + 1 < n {
                a.add(i, i + 1, off);
            }
        }
        a
    }

    #[test]
    fn two_by_two_inverse() {
        let a = tridiag(2, 2.0, 1.0);
        let f = a.cholesky().unwrap();
        let c0 = f.inverse_column(0);
        assert_abs_diff_eq!(c0[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c0[1], -1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn indefinite_is_rejected() {
        let a = tridiag(3, 1.0, 2.0);
        assert!(matches!(a.cholesky(), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn out_of_band_reads_zero() {
        let a = tridiag(4, 4.0, 1.0);
        assert_eq!(a.get(0, 2), 0.0);
        assert_eq!(a.get(2, 1), 1.0);
        assert_eq!(a.to_dense()[3][3], 4.0);
    }

    proptest! {
        #[test]
        fn solve_matches_product(
            n in 1usize..40,
            bw in 0usize..5,
            seed in proptest::collection::vec(-1.0f64..1.0, 400),
            rhs in proptest::collection::vec(-1.0f64..1.0, 40),
        ) {
            // diagonally dominant symmetric band
            let mut a = SymBanded::zeros(n, bw);
            let mut it = seed.iter().cycle();
            for i in 0..n {
                for d in 1..=bw.min(n - 1 - i.min(n - 1)) {
                    if i + d < n {
                        a.add(i, i + d, *it.next().unwrap());
                    }
                }
            }
            for i in 0..n {
                a.add(i, i, 2.0 * bw as f64 + 1.0);
            }
            let b = &rhs[..n];
            let x = a.cholesky().unwrap().solve(b);
            let back = a.mul_vec(&x);
            for (u, v) in back.iter().zip(b) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }
    }
}
