//! The assembled system `f_{-k+2}, ..., f_N`, with every function expressed
//! over the finest partition.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::function::{ortho_function, OrthoFunction};
use super::polynomial::{initial_block, PolynomialBlock};
use crate::bspline::refine::insert_knot_in_place;
use crate::bspline::{BasisEvaluator, GramSystem, QuadratureRule, Spline};
use crate::error::{Error, Result};
use crate::knots::{insert_event, partition_at, KnotSequence, Partition};

/// One function of the system as exported to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemEntry {
    /// `n`, from `-k + 2` up.
    pub level: i64,
    /// Insertion index; absent for the polynomials.
    pub i0: Option<usize>,
    /// SHA-256 of the knot vector the coefficients refer to.
    #[serde(rename = "knots-hash")]
    pub knots_hash: String,
    pub coeffs: Vec<f64>,
    #[serde(rename = "J")]
    pub j: [f64; 2],
    pub norm2: f64,
}

/// Orthonormal spline system of order `k` up to level `N`.
///
/// Functions are addressed by position `m = n + k - 2`, so position 0 is
/// the constant function and position `k - 1 + (n - 1)` is `f_n`.
#[derive(Debug, Clone)]
pub struct OrthoSystem {
    seq: KnotSequence,
    block: PolynomialBlock,
    /// Polynomial coefficients over the level-1 partition.
    block_coeffs: Vec<Vec<f64>>,
    functions: Vec<OrthoFunction>,
    partition: Partition,
    coeffs: Vec<Vec<f64>>,
    intervals: Vec<(f64, f64)>,
}

pub(crate) fn knots_hash(knots: &[f64]) -> String {
    let mut h = Sha256::new();
    for t in knots {
        h.update(t.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// B-spline coefficients of the block polynomials over `part`, by an exact
/// `L^2` projection.
fn block_over(block: &PolynomialBlock, part: &Partition) -> Result<Vec<Vec<f64>>> {
    let k = part.order();
    let g = GramSystem::new(part)?;
    let rule = QuadratureRule::gauss_legendre(k);
    let mut ev = BasisEvaluator::new(k);
    (0..block.len())
        .map(|m| {
            let mut rhs = vec![0.0; part.dim()];
            for (mu, a, b) in part.intervals() {
                for (x, w) in rule.on(a, b) {
                    let px = block.eval(m, x);
                    let vals = ev.eval_in_span(part, mu, x);
                    for (l, v) in vals.iter().enumerate() {
                        rhs[mu + 1 - k + l] += w * px * v;
                    }
                }
            }
            Ok(g.solve(&rhs))
        })
        .collect()
}

impl OrthoSystem {
    /// Builds `f_{-k+2}, ..., f_N` for the first `N` levels of `seq`.
    pub fn build(seq: &KnotSequence, n: usize) -> Result<OrthoSystem> {
        let seq = seq.prefix(n)?;
        let k = seq.order();
        let block = initial_block(k);
        let partition = partition_at(&seq, n)?;
        let base = partition_at(&seq, 1)?;
        let block_coeffs = block_over(&block, &base)?;
        let mut functions = Vec::with_capacity(n.saturating_sub(1));
        for level in 2..=n {
            let part = partition_at(&seq, level)?;
            let g = GramSystem::new(&part)?;
            functions.push(ortho_function(&g, insert_event(&seq, level)?.i0)?);
        }

        let lift = |level: usize, knots: &[f64], coeffs: &[f64]| {
            let mut t = knots.to_vec();
            let mut c = coeffs.to_vec();
            for &x in &seq.points()[level + 1..=n] {
                insert_knot_in_place(k, &mut t, &mut c, x);
            }
            debug_assert_eq!(t, partition.knots());
            c
        };
        let mut coeffs = Vec::with_capacity(n + k - 1);
        let mut intervals = Vec::with_capacity(n + k - 1);
        for c in &block_coeffs {
            coeffs.push(lift(1, base.knots(), c));
            intervals.push((0.0, 1.0));
        }
        for f in &functions {
            coeffs.push(lift(f.level, f.phi.partition().knots(), f.phi.coeffs()));
            intervals.push(f.char.interval);
        }
        Ok(OrthoSystem {
            seq,
            block,
            block_coeffs,
            functions,
            partition,
            coeffs,
            intervals,
        })
    }

    pub fn order(&self) -> usize {
        self.partition.order()
    }

    /// `N`.
    pub fn level(&self) -> usize {
        self.seq.max_level()
    }

    /// Number of functions, `N + k - 1`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Position of `f_n`.
    pub fn position(&self, n: i64) -> Result<usize> {
        let k = self.order() as i64;
        let m = n + k - 2;
        if m < 0 || m >= self.len() as i64 {
            return Err(Error::LevelOutOfRange {
                level: n.max(0) as usize,
                min: 0,
                max: self.level(),
            });
        }
        Ok(m as usize)
    }

    /// `n` of position `m`.
    pub fn index_at(&self, m: usize) -> i64 {
        m as i64 + 2 - self.order() as i64
    }

    pub fn sequence(&self) -> &KnotSequence {
        &self.seq
    }

    /// The level-`N` partition every coefficient vector refers to.
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn block(&self) -> &PolynomialBlock {
        &self.block
    }

    /// `f_2, ..., f_N`.
    pub fn functions(&self) -> &[OrthoFunction] {
        &self.functions
    }

    /// `f_n` for `n >= 2`.
    pub fn function(&self, n: usize) -> Option<&OrthoFunction> {
        n.checked_sub(2).and_then(|i| self.functions.get(i))
    }

    /// Coefficients of position `m` over [`partition`](Self::partition).
    pub fn coeffs(&self, m: usize) -> &[f64] {
        &self.coeffs[m]
    }

    /// Characteristic intervals by position; `[0, 1]` for the polynomials.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Position `m` as a spline over the finest partition.
    pub fn spline(&self, m: usize) -> Spline {
        Spline::new(self.partition.clone(), self.coeffs[m].clone()).expect("sizes agree")
    }

    /// Values of every function at `x` in knot interval `mu`.
    pub fn values_in_span(&self, ev: &mut BasisEvaluator, mu: usize, x: f64, out: &mut [f64]) {
        let k = self.order();
        let basis = ev.eval_in_span(&self.partition, mu, x);
        let first = mu + 1 - k;
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o = basis
                .iter()
                .zip(&c[first..first + k])
                .map(|(b, c)| b * c)
                .sum();
        }
    }

    pub fn values_at(&self, x: f64) -> Result<Vec<f64>> {
        let mu = self.partition.span_index(x)?;
        let mut out = vec![0.0; self.len()];
        self.values_in_span(&mut BasisEvaluator::new(self.order()), mu, x, &mut out);
        Ok(out)
    }

    /// `sum_m a[m] f_m` over the finest partition.
    pub fn combine(&self, a: &[f64]) -> Result<Spline> {
        if a.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: a.len(),
            });
        }
        let mut c = vec![0.0; self.partition.dim()];
        for (am, cm) in a.iter().zip(&self.coeffs) {
            for (ci, v) in c.iter_mut().zip(cm) {
                *ci += am * v;
            }
        }
        Spline::new(self.partition.clone(), c)
    }

    /// Gram system of the finest partition.
    pub fn gram(&self) -> Result<GramSystem> {
        GramSystem::new(&self.partition)
    }

    /// `max_{m,l} |<f_m, f_l> - delta_ml|`.
    pub fn orthonormality_defect(&self) -> Result<f64> {
        let g = self.gram()?;
        let images: Vec<Vec<f64>> = self.coeffs.iter().map(|c| g.band().mul_vec(c)).collect();
        let mut worst: f64 = 0.0;
        for (m, cm) in self.coeffs.iter().enumerate() {
            for (l, al) in images.iter().enumerate().skip(m) {
                let ip: f64 = cm.iter().zip(al).map(|(a, b)| a * b).sum();
                let want = if m == l { 1.0 } else { 0.0 };
                worst = worst.max((ip - want).abs());
            }
        }
        Ok(worst)
    }

    /// Each function over its own partition, polynomials over the level-1
    /// partition.
    pub fn export(&self) -> Vec<SystemEntry> {
        let base_hash = knots_hash(partition_at(&self.seq, 1).expect("level 1").knots());
        let polys = self
            .block_coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| SystemEntry {
                level: self.index_at(m),
                i0: None,
                knots_hash: base_hash.clone(),
                coeffs: c.clone(),
                j: [0.0, 1.0],
                norm2: 1.0,
            });
        let fns = self.functions.iter().map(|f| SystemEntry {
            level: f.level as i64,
            i0: Some(f.i0),
            knots_hash: knots_hash(f.phi.partition().knots()),
            coeffs: f.phi.coeffs().to_vec(),
            j: [f.char.interval.0, f.char.interval.1],
            norm2: f.norm2,
        });
        polys.chain(fns).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{random_admissible, validate_admissible, Law};
    use approx::assert_abs_diff_eq;

    #[test]
    fn haar_system() {
        let seq = validate_admissible(1, &[0.0, 1.0, 0.5, 0.25]).unwrap();
        let sys = OrthoSystem::build(&seq, 3).unwrap();
        assert_eq!(sys.len(), 3);
        assert_eq!(sys.coeffs(0), &[1.0, 1.0, 1.0]);
        let export = sys.export();
        assert_eq!(export[1].level, 2);
        assert_abs_diff_eq!(export[1].coeffs[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(export[1].coeffs[1], -1.0, epsilon = 1e-14);
        // f_2 over the finest partition (0, .25, .5, 1)
        assert_abs_diff_eq!(sys.coeffs(1)[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.coeffs(1)[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sys.coeffs(1)[2], -1.0, epsilon = 1e-14);
        assert!(sys.orthonormality_defect().unwrap() < 1e-14);
        assert_eq!(export[0].knots_hash.len(), 64);
    }

    #[test]
    fn orthonormal_for_each_order() {
        for k in 1..=5 {
            let seq = random_admissible(k as u64 + 100, k, 61, Law::UniformIid);
            let sys = OrthoSystem::build(&seq, 60).unwrap();
            assert_eq!(sys.len(), 60 + k - 1);
            let d = sys.orthonormality_defect().unwrap();
            assert!(d < 1e-10, "k={k} defect={d}");
        }
    }

    #[test]
    fn values_match_own_partition() {
        let seq = random_admissible(3, 3, 25, Law::DyadicShuffled);
        let sys = OrthoSystem::build(&seq, 24).unwrap();
        for x in [0.0, 0.13, 0.5, 0.77, 1.0] {
            let v = sys.values_at(x).unwrap();
            for f in sys.functions() {
                let m = sys.position(f.level as i64).unwrap();
                assert_abs_diff_eq!(v[m], f.phi.eval(x).unwrap(), epsilon = 1e-10);
            }
            assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn positions() {
        let seq = random_admissible(1, 4, 12, Law::UniformIid);
        let sys = OrthoSystem::build(&seq, 11).unwrap();
        assert_eq!(sys.position(-2).unwrap(), 0);
        assert_eq!(sys.position(2).unwrap(), 4);
        assert_eq!(sys.index_at(4), 2);
        assert!(sys.position(-3).is_err());
        assert!(sys.position(12).is_err());
        assert!(sys.function(11).is_some());
        assert!(sys.function(1).is_none());
    }
}
