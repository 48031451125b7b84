//! The orthonormal spline function attached to one knot insertion.

use serde::{Deserialize, Serialize};

use super::alpha::alpha_coefficients;
use crate::bspline::{GramSystem, Spline};
use crate::charint::{characteristic_interval, CharInterval};
use crate::error::{Error, Result};

/// `f_n = g / ||g||_2` with `g = sum_l w_l N_l`, `w = B alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoFunction {
    pub level: usize,
    pub i0: usize,
    /// `alpha_j` for `j = i0 - k, ..., i0`.
    pub alpha: Vec<f64>,
    /// B-spline coefficients of `g`.
    pub w: Vec<f64>,
    /// `||g||_2`.
    pub norm2: f64,
    pub phi: Spline,
    pub char: CharInterval,
}

impl OrthoFunction {
    pub fn order(&self) -> usize {
        self.phi.order()
    }

    /// `alpha_j` by absolute index `j`, zero outside `i0 - k..=i0`.
    pub fn alpha_at(&self, j: usize) -> f64 {
        let first = self.i0 - self.order();
        if j >= first && j <= self.i0 {
            self.alpha[j - first]
        } else {
            0.0
        }
    }
}

/// Builds `f_n` from the level-`n` Gram system and the insertion index.
///
/// `w` comes from one banded solve `A w = alpha` (alpha padded by zeros),
/// which equals `sum_j alpha_j` times column `j` of `B = A^{-1}`.
pub fn ortho_function(g: &GramSystem, i0: usize) -> Result<OrthoFunction> {
    let part = g.partition();
    let k = part.order();
    let alpha = alpha_coefficients(part, i0)?;
    let first = i0 - k;
    let mut rhs = vec![0.0; g.dim()];
    rhs[first..=i0].copy_from_slice(&alpha);
    let w = g.solve(&rhs);
    let sq: f64 = alpha.iter().zip(&w[first..=i0]).map(|(a, w)| a * w).sum();
    if !(sq > 0.0) {
        return Err(Error::NotPositiveDefinite(i0));
    }
    let norm2 = sq.sqrt();
    let phi = Spline::new(part.clone(), w.iter().map(|v| v / norm2).collect())?;
    let char = characteristic_interval(part, i0, &alpha)?;
    Ok(OrthoFunction {
        level: part.level(),
        i0,
        alpha,
        w,
        norm2,
        phi,
        char,
    })
}

/// `|w_{j0}| / b_{j0 j0}`.
pub fn estwj_ratio(of: &OrthoFunction, g: &GramSystem) -> f64 {
    let j0 = of.char.j0;
    let b = match g.inverse() {
        Ok(inv) => inv[(j0, j0)],
        Err(_) => g.inverse_column(j0)[j0],
    };
    of.w[j0].abs() / b
}

/// Largest relative gap `(sum_j |alpha_j b_jl| - |w_l|) / sum_j |alpha_j b_jl|`
/// over all `l`; zero when no cancellation occurs in `w_l = sum_j alpha_j b_jl`.
pub fn abs_identity_defect(of: &OrthoFunction, g: &GramSystem) -> f64 {
    let k = of.order();
    let first = of.i0 - k;
    let cols: Vec<Vec<f64>> = (first..=of.i0).map(|j| g.inverse_column(j)).collect();
    let mut worst: f64 = 0.0;
    for l in 0..g.dim() {
        let mut signed = 0.0;
        let mut total = 0.0;
        for (a, col) in of.alpha.iter().zip(&cols) {
            signed += a * col[l];
            total += (a * col[l]).abs();
        }
        if total > 0.0 {
            worst = worst.max((total - signed.abs()) / total);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{insert_event, partition_at, random_admissible, Law, Partition};
    use approx::assert_abs_diff_eq;

    #[test]
    fn haar_like_function() {
        let p = Partition::from_knots(1, vec![0.0, 0.5, 1.0]).unwrap();
        let g = GramSystem::new(&p).unwrap();
        let f = ortho_function(&g, 1).unwrap();
        assert_abs_diff_eq!(f.w[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.w[1], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.norm2, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.phi.coeffs()[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.phi.coeffs()[1], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(estwj_ratio(&f, &g), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn orthogonal_to_coarse_space() {
        for k in 1..=5 {
            let seq = random_admissible(11 + k as u64, k, 40, Law::UniformIid);
            for n in 2..=39 {
                let part = partition_at(&seq, n).unwrap();
                let g = GramSystem::new(&part).unwrap();
                let ev = insert_event(&seq, n).unwrap();
                let f = ortho_function(&g, ev.i0).unwrap();
                assert_abs_diff_eq!(
                    g.inner(f.phi.coeffs(), f.phi.coeffs()),
                    1.0,
                    epsilon = 1e-10
                );
                // coarse B-splines are B-splines of the partition without knot i0
                let coarse = part.without_knot(ev.i0).unwrap();
                let r = crate::bspline::boehm_refine(&coarse, &part, ev.i0).unwrap();
                let ag = g.band().mul_vec(f.phi.coeffs());
                for row in r.to_dense() {
                    let ip: f64 = row.iter().zip(&ag).map(|(a, b)| a * b).sum();
                    assert!(ip.abs() < 1e-10, "k={k} n={n} ip={ip}");
                }
                assert!(abs_identity_defect(&f, &g) < 1e-12);
                assert!(estwj_ratio(&f, &g) > 0.0);
            }
        }
    }

    #[test]
    fn ratio_is_scale_invariant() {
        let seq = random_admissible(5, 3, 30, Law::UniformIid);
        let part = partition_at(&seq, 25).unwrap();
        let ev = insert_event(&seq, 25).unwrap();
        let g = GramSystem::new(&part).unwrap();
        let gs = GramSystem::new(&part.scaled(7.5).unwrap()).unwrap();
        let r = estwj_ratio(&ortho_function(&g, ev.i0).unwrap(), &g);
        let rs = estwj_ratio(&ortho_function(&gs, ev.i0).unwrap(), &gs);
        assert_abs_diff_eq!(r, rs, epsilon = 1e-10 * r);
    }
}
