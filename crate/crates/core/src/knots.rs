//! Admissible knot sequences and the nested partitions they generate.
//!
//! A sequence `t_0 = 0, t_1 = 1, t_2, t_3, ...` with every interior value
//! repeated at most `k` times generates, for each level `n`, the knot vector
//! of order `k` whose boundary knots `0` and `1` have multiplicity `k` and
//! whose interior knots are the multiset `{t_2, ..., t_n}`.
//!
//! All indices in this crate are zero-based: the knot vector of a partition
//! with `M` B-splines is `knots[0..M + k]`, and B-spline `j` lives on
//! `[knots[j], knots[j + k]]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// On-disk form of a knot sequence: `{"k": int, "points": [floats]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotFile {
    pub k: usize,
    pub points: Vec<f64>,
}

/// A validated admissible point sequence together with the spline order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KnotFile", into = "KnotFile")]
pub struct KnotSequence {
    order: usize,
    points: Vec<f64>,
}

impl TryFrom<KnotFile> for KnotSequence {
    type Error = Error;

    fn try_from(file: KnotFile) -> Result<Self> {
        validate_admissible(file.k, &file.points)
    }
}

impl From<KnotSequence> for KnotFile {
    fn from(seq: KnotSequence) -> Self {
        KnotFile {
            k: seq.order,
            points: seq.points,
        }
    }
}

/// Checks boundary, range and multiplicity of `raw_points` for order `k`.
///
/// The sequence is never reordered. Density of the sequence cannot be
/// decided on a finite prefix and is not checked.
pub fn validate_admissible(k: usize, raw_points: &[f64]) -> Result<KnotSequence> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    if raw_points.len() < 2 || raw_points[0] != 0.0 || raw_points[1] != 1.0 {
        return Err(Error::BadBoundary);
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for (index, &t) in raw_points.iter().enumerate().skip(2) {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::OutOfRange(index));
        }
        let count = counts.entry(t.to_bits()).or_insert(0);
        *count += 1;
        if *count > k {
            return Err(Error::MultiplicityExceeded(t));
        }
    }
    Ok(KnotSequence {
        order: k,
        points: raw_points.to_vec(),
    })
}

impl KnotSequence {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Largest level `n` for which `partition_at` succeeds.
    pub fn max_level(&self) -> usize {
        self.points.len() - 1
    }

    /// The same sequence truncated to `t_0, ..., t_n`.
    pub fn prefix(&self, n: usize) -> Result<KnotSequence> {
        self.check_level(n, 1)?;
        Ok(KnotSequence {
            order: self.order,
            points: self.points[..=n].to_vec(),
        })
    }

    /// Whether `x` is one of the points `t_0, t_1, ...`.
    pub fn contains(&self, x: f64) -> bool {
        self.points.contains(&x)
    }

    fn check_level(&self, n: usize, min: usize) -> Result<()> {
        if n < min || n > self.max_level() {
            return Err(Error::LevelOutOfRange {
                level: n,
                min,
                max: self.max_level(),
            });
        }
        Ok(())
    }
}

/// Knot vector of order `k` with boundary knots of multiplicity `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    order: usize,
    knots: Vec<f64>,
}

impl Partition {
    /// Builds a partition from an explicit knot vector.
    ///
    /// The vector must be nondecreasing, carry `k` equal knots at each end
    /// and satisfy `knots[i] < knots[i + k]` for every B-spline index `i`.
    pub fn from_knots(order: usize, knots: Vec<f64>) -> Result<Partition> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        let len = knots.len();
        if len < 2 * order {
            return Err(Error::InvalidKnots(format!(
                "need at least {} knots for order {order}, got {len}",
                2 * order
            )));
        }
        if knots.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidKnots("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidKnots("knots are not sorted".into()));
        }
        let (a, b) = (knots[0], knots[len - 1]);
        if knots[..order].iter().any(|&t| t != a) || knots[len - order..].iter().any(|&t| t != b) {
            return Err(Error::InvalidKnots(
                "boundary knots must have multiplicity equal to the order".into(),
            ));
        }
        let dim = len - order;
        if (0..dim).any(|i| knots[i] >= knots[i + order]) {
            return Err(Error::InvalidKnots(
                "a knot value exceeds multiplicity k".into(),
            ));
        }
        Ok(Partition { order, knots })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of B-splines `M`.
    pub fn dim(&self) -> usize {
        self.knots.len() - self.order
    }

    /// Number of sequence points consumed beyond the boundary pair, `M - k + 1`.
    pub fn level(&self) -> usize {
        self.dim() + 1 - self.order
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (a, b) = self.domain();
        x >= a && x <= b
    }

    /// Support `[knots[j], knots[j + k]]` of B-spline `j`.
    pub fn support(&self, j: usize) -> (f64, f64) {
        (self.knots[j], self.knots[j + self.order])
    }

    /// Support length `nu_j`.
    pub fn support_len(&self, j: usize) -> f64 {
        self.knots[j + self.order] - self.knots[j]
    }

    /// Index `mu` of the knot interval `[knots[mu], knots[mu + 1])` holding `x`.
    ///
    /// Right-continuous at interior knots; the right end of the domain is
    /// assigned to the last nonempty interval.
    pub fn span_index(&self, x: f64) -> Result<usize> {
        if !self.contains(x) {
            return Err(Error::DomainError(x));
        }
        let last = self.dim() - 1;
        let count = self.knots.partition_point(|&t| t <= x);
        Ok((count.max(1) - 1).min(last))
    }

    /// Nonempty knot intervals as `(mu, left, right)`.
    pub fn intervals(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let k = self.order;
        (k - 1..self.dim()).filter_map(move |mu| {
            let (a, b) = (self.knots[mu], self.knots[mu + 1]);
            (b > a).then_some((mu, a, b))
        })
    }

    /// Distinct knot values in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(self.knots.len());
        for &t in &self.knots {
            if out.last() != Some(&t) {
                out.push(t);
            }
        }
        out
    }

    /// The partition with the knot at `index` removed.
    pub fn without_knot(&self, index: usize) -> Result<Partition> {
        let k = self.order;
        if index < k || index >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                min: k,
                max: self.dim().saturating_sub(1),
            });
        }
        let mut knots = self.knots.clone();
        knots.remove(index);
        Partition::from_knots(k, knots)
    }

    /// Inserts `x` after any knots equal to it; returns the new partition and
    /// the index of the inserted knot.
    pub fn with_knot(&self, x: f64) -> Result<(Partition, usize)> {
        let (a, b) = self.domain();
        if !(x > a && x < b) {
            return Err(Error::DomainError(x));
        }
        let index = self.knots.partition_point(|&t| t <= x);
        let mut knots = self.knots.clone();
        knots.insert(index, x);
        Ok((Partition::from_knots(self.order, knots)?, index))
    }

    /// The same knots scaled by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Partition> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale {c} must be positive"
            )));
        }
        Partition::from_knots(self.order, self.knots.iter().map(|t| t * c).collect())
    }
}

/// Knot vector of level `n`: boundary pair with multiplicity `k` plus the
/// sorted multiset `{t_2, ..., t_n}`. Level 1 is the pure polynomial space.
pub fn partition_at(seq: &KnotSequence, n: usize) -> Result<Partition> {
    seq.check_level(n, 1)?;
    let k = seq.order;
    let mut interior = seq.points[2..=n].to_vec();
    interior.sort_by(f64::total_cmp);
    let mut knots = Vec::with_capacity(n + 2 * k - 1);
    knots.extend(std::iter::repeat_n(0.0, k));
    knots.extend(interior);
    knots.extend(std::iter::repeat_n(1.0, k));
    Partition::from_knots(k, knots)
}

/// Where `t_n` sits in the level-`n` knot vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertEvent {
    pub level: usize,
    /// Zero-based position of `t_n`; `k <= i0 <= M - 1`.
    pub i0: usize,
}

/// Locates the knot inserted at level `n`. Among equal knot values the last
/// copy is taken, so removing `knots[i0]` gives the level-`(n - 1)` partition.
pub fn insert_event(seq: &KnotSequence, n: usize) -> Result<InsertEvent> {
    seq.check_level(n, 2)?;
    let t = seq.points[n];
    let at_or_below = seq.points[2..=n].iter().filter(|&&s| s <= t).count();
    Ok(InsertEvent {
        level: n,
        i0: seq.order + at_or_below - 1,
    })
}

/// Point law used by [`random_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    UniformIid,
    DyadicShuffled,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Law::UniformIid => f.write_str("uniform-iid"),
            Law::DyadicShuffled => f.write_str("dyadic-shuffled"),
        }
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-iid" | "uniform" => Ok(Law::UniformIid),
            "dyadic-shuffled" | "dyadic" => Ok(Law::DyadicShuffled),
            other => Err(Error::InvalidParameter(format!("unknown law {other:?}"))),
        }
    }
}

/// Generator parameters as stored next to generated sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub seed: u64,
    pub law: Law,
    pub n_points: usize,
}

/// Deterministic random admissible sequence of `n_points` points
/// (boundary pair included).
///
/// `DyadicShuffled` emits the dyadic rationals level by level
/// (`1/2`, then `1/4, 3/4` in random order, then the odd multiples of `1/8`,
/// ...), shuffling within each level.
pub fn random_admissible(seed: u64, k: usize, n_points: usize, law: Law) -> KnotSequence {
    let k = k.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![0.0, 1.0];
    let target = n_points.max(2);
    match law {
        Law::UniformIid => {
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            while points.len() < target {
                let t: f64 = rng.random();
                if t <= 0.0 {
                    continue;
                }
                let count = counts.entry(t.to_bits()).or_insert(0);
                if *count == k {
                    continue;
                }
                *count += 1;
                points.push(t);
            }
        }
        Law::DyadicShuffled => {
            let mut level = 1u32;
            while points.len() < target {
                let denom = (1u64 << level) as f64;
                let mut row: Vec<f64> = (0..1u64 << (level - 1))
                    .map(|m| (2 * m + 1) as f64 / denom)
                    .collect();
                row.shuffle(&mut rng);
                let room = target - points.len();
                points.extend(row.into_iter().take(room));
                level += 1;
            }
        }
    }
    KnotSequence { order: k, points }
}
