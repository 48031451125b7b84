//! Splines over a partition, their `L^p` norms and de Boor stability.

use serde::{Deserialize, Serialize};

use super::basis::BasisEvaluator;
use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};
use crate::knots::Partition;

/// On-disk form `{"k": int, "knots": [floats], "coeffs": [floats]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineFile {
    pub k: usize,
    pub knots: Vec<f64>,
    pub coeffs: Vec<f64>,
}

/// `sum_j coeffs[j] N_j` over the B-splines of `partition`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplineFile", into = "SplineFile")]
pub struct Spline {
    partition: Partition,
    coeffs: Vec<f64>,
}

impl TryFrom<SplineFile> for Spline {
    type Error = Error;

    fn try_from(file: SplineFile) -> Result<Self> {
        Spline::new(Partition::from_knots(file.k, file.knots)?, file.coeffs)
    }
}

impl From<Spline> for SplineFile {
    fn from(s: Spline) -> Self {
        SplineFile {
            k: s.partition.order(),
            knots: s.partition.knots().to_vec(),
            coeffs: s.coeffs,
        }
    }
}

impl Spline {
    pub fn new(partition: Partition, coeffs: Vec<f64>) -> Result<Spline> {
        if coeffs.len() != partition.dim() {
            return Err(Error::DimensionMismatch {
                expected: partition.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Spline { partition, coeffs })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.partition.order()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let mut ev = BasisEvaluator::new(self.order());
        let mu = self.partition.span_index(x)?;
        Ok(self.eval_in_span(&mut ev, mu, x))
    }

    /// Value of the polynomial piece on knot interval `mu` at `x` (which may
    /// be an endpoint of that interval).
    pub fn eval_in_span(&self, ev: &mut BasisEvaluator, mu: usize, x: f64) -> f64 {
        let first = mu + 1 - self.order();
        ev.eval_in_span(&self.partition, mu, x)
            .iter()
            .zip(&self.coeffs[first..])
            .map(|(n, c)| n * c)
            .sum()
    }

    /// Multiplies all coefficients by `c`.
    pub fn scaled(&self, c: f64) -> Spline {
        Spline {
            partition: self.partition.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `L^p` norm on `[a, b]`; see [`lp_norm`].
    pub fn lp_norm(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        lp_norm(self, p, a, b)
    }
}

/// Gauss nodes per knot interval for `|f|^p` with non-integer `p`.
pub fn norm_nodes(order: usize) -> usize {
    order + 2
}

/// Chebyshev samples per knot interval for the sup norm.
pub fn sup_samples(order: usize) -> usize {
    8 * order
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "exponent p = {p} must lie in [1, inf]"
        )))
    }
}

/// `||f||_{L^p(a, b)}` for `p` in `[1, inf]`.
///
/// Finite `p` integrates `|f|^p` with `k + 2` Gauss nodes on every knot
/// interval meeting `[a, b]` (exact for `p = 2`). `p = inf` takes the max
/// over `8k` Chebyshev points per interval plus both interval endpoints.
pub fn lp_norm(f: &Spline, p: f64, a: f64, b: f64) -> Result<f64> {
    check_exponent(p)?;
    let part = f.partition();
    if !(a <= b) {
        return Err(Error::DomainError(a));
    }
    for x in [a, b] {
        if !part.contains(x) {
            return Err(Error::DomainError(x));
        }
    }
    let k = f.order();
    let mut ev = BasisEvaluator::new(k);
    let pieces = part.intervals().filter_map(|(mu, l, r)| {
        let (lo, hi) = (l.max(a), r.min(b));
        (hi > lo).then_some((mu, lo, hi))
    });
    if p.is_infinite() {
        let m = sup_samples(k);
        let mut best: f64 = 0.0;
        for (mu, lo, hi) in pieces {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            best = best
                .max(f.eval_in_span(&mut ev, mu, lo).abs())
                .max(f.eval_in_span(&mut ev, mu, hi).abs());
            for i in 0..m {
                let theta = std::f64::consts::PI * (i as f64 + 0.5) / m as f64;
                let x = mid + half * theta.cos();
                best = best.max(f.eval_in_span(&mut ev, mu, x).abs());
            }
        }
        return Ok(best);
    }
    let rule = QuadratureRule::gauss_legendre(norm_nodes(k));
    let mut acc = 0.0;
    for (mu, lo, hi) in pieces {
        for (x, w) in rule.on(lo, hi) {
            acc += w * f.eval_in_span(&mut ev, mu, x).abs().powf(p);
        }
    }
    Ok(acc.powf(1.0 / p))
}

/// Outcome of the two de Boor stability checks for one spline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRatio {
    /// `||f||_p / ||(a_j nu_j^{1/p})||_{l^p}`.
    pub ratio: f64,
    /// `max_j |a_j| |J_j|^{1/p} / ||f||_{L^p(J_j)}` with `J_j` the longest
    /// knot interval inside the support of `N_j`.
    pub coeff_quotient: f64,
}

/// Longest knot interval inside `[knots[j], knots[j + k]]`, leftmost on ties.
pub fn longest_subinterval(part: &Partition, j: usize) -> (f64, f64) {
    let t = part.knots();
    let k = part.order();
    let mut best = (t[j], t[j + 1]);
    for i in j + 1..j + k {
        if t[i + 1] - t[i] > best.1 - best.0 {
            best = (t[i], t[i + 1]);
        }
    }
    best
}

pub fn deboor_stability_ratio(f: &Spline, p: f64) -> Result<StabilityRatio> {
    if p.is_infinite() {
        return Err(Error::InvalidParameter(
            "stability ratio needs finite p".into(),
        ));
    }
    check_exponent(p)?;
    let part = f.partition();
    let (lo, hi) = part.domain();
    let norm = lp_norm(f, p, lo, hi)?;
    let seq: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| a.abs().powf(p) * part.support_len(j))
        .sum::<f64>()
        .powf(1.0 / p);
    let mut coeff_quotient: f64 = 0.0;
    for (j, a) in f.coeffs().iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        let (l, r) = longest_subinterval(part, j);
        let local = lp_norm(f, p, l, r)?;
        let q = a.abs() * (r - l).powf(1.0 / p) / local;
        coeff_quotient = coeff_quotient.max(q);
    }
    Ok(StabilityRatio {
        ratio: norm / seq,
        coeff_quotient,
    })
}
