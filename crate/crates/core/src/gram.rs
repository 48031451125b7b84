//! Structural checks on the inverse `B = (b_ij)` of the B-spline Gram
//! matrix: checkerboard signs, the diagonal bound `a_ii b_ii >= 1`, and a
//! fitted geometric envelope `|b_ij| (t_{max(i,j)+k} - t_{min(i,j)}) <= C
//! gamma^{|i-j|}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bspline::GramSystem;
use crate::error::{Error, Result};

/// Relative slack for sign checks on entries that are exactly zero.
pub const SIGN_TOL: f64 = 1e-12;

/// Offsets whose weighted maximum falls below this fraction of the diagonal
/// maximum are treated as rounding noise.
pub const NOISE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignViolation {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckerboardOutcome {
    pub pass: bool,
    pub first_violation: Option<SignViolation>,
    /// `max_ij max(0, -(-1)^{i+j} b_ij) / max|b|`.
    pub worst_relative: f64,
}

/// Checks `(-1)^{i+j} b_ij >= -tol * max|b|` for every entry.
pub fn checkerboard_dense(b: &DMatrix<f64>, tol: f64) -> CheckerboardOutcome {
    let scale = b.amax();
    let mut first = None;
    let mut worst: f64 = 0.0;
    for j in 0..b.ncols() {
        for i in 0..b.nrows() {
            let signed = if (i + j) % 2 == 0 {
                b[(i, j)]
            } else {
                -b[(i, j)]
            };
            if signed < 0.0 {
                worst = worst.max(-signed / scale);
            }
            if signed < -tol * scale && first.is_none() {
                first = Some(SignViolation {
                    i,
                    j,
                    value: b[(i, j)],
                });
            }
        }
    }
    CheckerboardOutcome {
        pass: first.is_none(),
        first_violation: first,
        worst_relative: worst,
    }
}

pub fn checkerboard_check(g: &GramSystem) -> Result<CheckerboardOutcome> {
    Ok(checkerboard_dense(g.inverse()?, SIGN_TOL))
}

/// `r_i = 1 / (c_ii d_ii)` for a symmetric positive definite `c` and its
/// inverse `d`; every `r_i <= 1`.
pub fn diag_inverse_ratios(c: &DMatrix<f64>, d: &DMatrix<f64>) -> Vec<f64> {
    (0..c.nrows())
        .map(|i| 1.0 / (c[(i, i)] * d[(i, i)]))
        .collect()
}

/// `max_i 1 / (a_ii b_ii)`.
pub fn diag_inverse_bound(g: &GramSystem) -> Result<f64> {
    let b = g.inverse()?;
    Ok((0..g.dim())
        .map(|i| 1.0 / (g.entry(i, i) * b[(i, i)]))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Fitted geometric envelope of the Gram inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    #[serde(rename = "gamma")]
    pub gamma_hat: f64,
    #[serde(rename = "C")]
    pub c_hat: f64,
    /// Largest `log(|b_ij| spread_ij / (C gamma^{|i-j|}))` above the noise floor.
    pub residual: f64,
    #[serde(rename = "M")]
    pub dim: usize,
    pub k: usize,
    /// `m_d = max_{|i-j| = d} |b_ij| spread_ij` for the offsets used in the fit.
    #[serde(skip)]
    pub offsets: Vec<f64>,
}

/// `|b_ij| (t_{max(i,j)+k} - t_{min(i,j)})`.
fn weighted(g: &GramSystem, b: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    let t = g.partition().knots();
    let k = g.partition().order();
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    b[(i, j)].abs() * (t[hi + k] - t[lo])
}

/// Per-offset maxima `m_d` of the weighted inverse entries.
pub fn offset_maxima(g: &GramSystem) -> Result<Vec<f64>> {
    let b = g.inverse()?;
    let m = g.dim();
    let mut out = vec![0.0f64; m];
    for i in 0..m {
        for j in i..m {
            let v = weighted(g, b, i, j);
            out[j - i] = out[j - i].max(v);
        }
    }
    Ok(out)
}

/// Least-squares fit of `log m_d = log C + d log gamma`, followed by
/// inflating `C` until the envelope dominates every entry above the noise
/// floor.
///
/// The weight `t_{max+k} - t_min` grows linearly in the offset, so the first
/// offsets carry an algebraic factor on top of the geometric decay. The rate
/// is therefore fitted on the upper half of the offsets above the noise
/// floor (at least three of them).
pub fn decay_profile(g: &GramSystem) -> Result<DecayProfile> {
    let k = g.partition().order();
    let dim = g.dim();
    let b = g.inverse()?;
    let all = offset_maxima(g)?;
    let m0 = all[0];
    if all[1..].iter().all(|&v| v == 0.0) {
        return Ok(DecayProfile {
            gamma_hat: 0.0,
            c_hat: m0,
            residual: 0.0,
            dim,
            k,
            offsets: vec![m0],
        });
    }
    if dim < 2 * k {
        return Err(Error::DegenerateFit(dim));
    }
    let floor = NOISE_FLOOR * m0;
    let used: Vec<f64> = all.iter().copied().take_while(|&v| v > floor).collect();
    if used.len() < 3 {
        return Err(Error::DegenerateFit(used.len()));
    }
    let start = (used.len() / 2).min(used.len() - 3);
    let (slope, intercept) = least_squares(
        used.iter()
            .enumerate()
            .skip(start)
            .map(|(d, v)| (d as f64, v.ln())),
    );
    let gamma_hat = slope.exp();
    let log_gamma = slope;
    let mut excess = f64::NEG_INFINITY;
    for i in 0..dim {
        for j in i..dim {
            let v = weighted(g, b, i, j);
            if v > floor {
                excess = excess.max(v.ln() - intercept - (j - i) as f64 * log_gamma);
            }
        }
    }
    let log_c = intercept + excess.max(0.0);
    let residual = excess - excess.max(0.0);
    Ok(DecayProfile {
        gamma_hat,
        c_hat: log_c.exp(),
        residual,
        dim,
        k,
        offsets: used,
    })
}

/// Ordinary least squares `y = slope * x + intercept`.
fn least_squares(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::Partition;
    use approx::assert_abs_diff_eq;

    fn gram(k: usize, knots: &[f64]) -> GramSystem {
        GramSystem::with_inverse(&Partition::from_knots(k, knots.to_vec()).unwrap()).unwrap()
    }

    fn uniform(k: usize, cells: usize) -> Vec<f64> {
        let mut t = vec![0.0; k];
        t.extend((1..cells).map(|i| i as f64 / cells as f64));
        t.extend(vec![1.0; k]);
        t
    }

    #[test]
    fn hat_inverse_by_hand() {
        // A = [[1/6,1/12,0],[1/12,1/3,1/12],[0,1/12,1/6]], det A = 1/144,
        // B = 144 adj(A): b11 = 7, b12 = -2, b13 = 1, b22 = 4
        let g = gram(2, &[0.0, 0.0, 0.5, 1.0, 1.0]);
        let b = g.inverse().unwrap();
        assert_abs_diff_eq!(b[(0, 0)], 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[(0, 1)], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[(0, 2)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[(1, 1)], 4.0, epsilon = 1e-12);
        let cb = checkerboard_check(&g).unwrap();
        assert!(cb.pass);
        // r_1 = 1/(1/6 * 7) = 6/7, r_2 = 1/(1/3 * 4) = 3/4
        let r = diag_inverse_bound(&g).unwrap();
        assert_abs_diff_eq!(r, 6.0 / 7.0, epsilon = 1e-12);
        assert!(r < 1.0);
    }

    #[test]
    fn piecewise_constants_are_diagonal() {
        let g = gram(1, &[0.0, 0.1, 0.35, 1.0]);
        assert!(checkerboard_check(&g).unwrap().pass);
        assert_abs_diff_eq!(diag_inverse_bound(&g).unwrap(), 1.0, epsilon = 1e-15);
        let prof = decay_profile(&g).unwrap();
        assert_eq!(prof.gamma_hat, 0.0);
        assert_eq!(prof.residual, 0.0);
    }

    #[test]
    fn injected_sign_fault_is_found() {
        let g = gram(3, &uniform(3, 12));
        let mut b = g.inverse().unwrap().clone();
        assert!(checkerboard_dense(&b, SIGN_TOL).pass);
        b[(4, 7)] = -b[(4, 7)];
        let out = checkerboard_dense(&b, SIGN_TOL);
        assert!(!out.pass);
        assert_eq!(out.first_violation.map(|v| (v.i, v.j)), Some((4, 7)));
    }

    #[test]
    fn two_by_two_helper() {
        let c = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let d = c.clone().try_inverse().unwrap();
        assert_abs_diff_eq!(d[(0, 0)], 2.0 / 3.0, epsilon = 1e-15);
        let r = diag_inverse_ratios(&c, &d);
        assert_abs_diff_eq!(r[0], 0.75, epsilon = 1e-15);
        assert!(d[(0, 0)] >= 1.0 / c[(0, 0)]);
    }

    #[test]
    fn inverse_not_available() {
        let g = GramSystem::new(&Partition::from_knots(2, uniform(2, 4)).unwrap()).unwrap();
        assert_eq!(
            checkerboard_check(&g).unwrap_err(),
            Error::InverseNotAvailable
        );
        assert_eq!(
            diag_inverse_bound(&g).unwrap_err(),
            Error::InverseNotAvailable
        );
        assert_eq!(decay_profile(&g).unwrap_err(), Error::InverseNotAvailable);
    }

    #[test]
    fn envelope_dominates() {
        let g = gram(3, &uniform(3, 60));
        let p = decay_profile(&g).unwrap();
        assert!(p.residual <= 0.0);
        assert!(p.gamma_hat > 0.0 && p.gamma_hat < 1.0);
        let json = serde_json::to_value(&p).unwrap();
        for key in ["gamma", "C", "residual", "M", "k"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
