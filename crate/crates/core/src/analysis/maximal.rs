//! Square, maximal and Hardy–Littlewood maximal functions on a uniform grid.

use serde::{Deserialize, Serialize};

use super::expansion::Expansion;
use super::table::ValueTable;

/// Samples at the cell midpoints `(i + 1/2) / G` of a uniform grid; read as
/// the piecewise constant function equal to `values[i]` on cell `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> GridFunction {
        GridFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Midpoint-rule `L^p` norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let h = 1.0 / self.len() as f64;
        (self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * h).powf(1.0 / p)
    }
}

/// `Sf = (sum_m |a_m f_m|^2)^{1/2}` at every table point.
pub fn square_function(e: &Expansion, table: &ValueTable) -> GridFunction {
    GridFunction::new(
        (0..table.len())
            .map(|i| {
                table
                    .row(i)
                    .iter()
                    .zip(&e.coeffs)
                    .map(|(v, a)| (a * v) * (a * v))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect(),
    )
}

/// `Mf = max_m |sum_{l <= m} a_l f_l|` at every table point.
pub fn maximal_function(e: &Expansion, table: &ValueTable) -> GridFunction {
    GridFunction::new(
        (0..table.len())
            .map(|i| {
                let mut s = 0.0;
                let mut best: f64 = 0.0;
                for (v, a) in table.row(i).iter().zip(&e.coeffs) {
                    s += a * v;
                    best = best.max(s.abs());
                }
                best
            })
            .collect(),
    )
}

/// Largest slope from `q` to a point on the left, over the lower convex hull
/// `hull` of those points (x increasing).
fn best_slope(hull: &[(f64, f64)], q: (f64, f64)) -> f64 {
    let slope = |p: (f64, f64)| (q.1 - p.1) / (q.0 - p.0);
    // along a lower hull the slope to q increases then decreases
    let (mut lo, mut hi) = (0, hull.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if slope(hull[mid]) < slope(hull[mid + 1]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    slope(hull[lo])
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// For each cell midpoint, the largest average of `|g|` over intervals
/// `[l, x]` with `l` a cell boundary at or left of the cell.
fn left_sweep(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let h = 1.0 / n as f64;
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(n + 1);
    let mut prefix = 0.0;
    let mut out = Vec::with_capacity(n);
    for (i, v) in g.iter().enumerate() {
        let p = (i as f64 * h, prefix);
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
        let q = ((i as f64 + 0.5) * h, prefix + 0.5 * h * v.abs());
        out.push(best_slope(&hull, q));
        prefix += h * v.abs();
    }
    out
}

/// Hardy–Littlewood maximal function of the piecewise constant `g`,
/// evaluated at the cell midpoints.
///
/// An average over `I` containing `x` is monotone in each endpoint between
/// cell boundaries, so the supremum is attained with each endpoint either at
/// a cell boundary or at `x` itself. With one endpoint at `x` the best other
/// endpoint is a tangent to the convex hull of the prefix integral, and
/// `max(left, right, |g(x)|)` equals the supremum over all intervals.
pub fn hl_maximal(g: &GridFunction) -> GridFunction {
    if g.is_empty() {
        return g.clone();
    }
    let left = left_sweep(&g.values);
    let rev: Vec<f64> = g.values.iter().rev().copied().collect();
    let mut right = left_sweep(&rev);
    right.reverse();
    GridFunction::new(
        g.values
            .iter()
            .zip(left.iter().zip(&right))
            .map(|(v, (l, r))| v.abs().max(*l).max(*r))
            .collect(),
    )
}

/// Same supremum by enumerating every pair of admissible endpoints; `O(G^3)`.
pub fn hl_maximal_bruteforce(g: &GridFunction) -> GridFunction {
    let n = g.len();
    let h = 1.0 / n as f64;
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + h * g.values[i].abs();
    }
    let integral = |x: f64| {
        let c = ((x / h).floor() as usize).min(n - 1);
        prefix[c] + (x - c as f64 * h) * g.values[c].abs()
    };
    GridFunction::new(
        (0..n)
            .map(|c| {
                let x = (c as f64 + 0.5) * h;
                let lefts = (0..=c).map(|l| l as f64 * h).chain([x]);
                let mut best = g.values[c].abs();
                for l in lefts {
                    for r in (c + 1..=n).map(|r| r as f64 * h).chain([x]) {
                        if r > l {
                            best = best.max((integral(r) - integral(l)) / (r - l));
                        }
                    }
                }
                best
            })
            .collect(),
    )
}

/// `E = [Sf > lambda]` and `B = [M 1_E > r]` as sets of grid cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSets {
    pub lambda: f64,
    pub r: f64,
    pub e: Vec<bool>,
    pub b: Vec<bool>,
    pub e_measure: f64,
    pub b_measure: f64,
    /// Whether every cell of `E` lies in `B`.
    pub included: bool,
}

impl LevelSets {
    /// `|B| r / |E|`, the constant in `|B| <= (c / r) |E|`.
    pub fn weak_type_constant(&self) -> f64 {
        if self.e_measure == 0.0 {
            0.0
        } else {
            self.b_measure * self.r / self.e_measure
        }
    }
}

/// Level sets of the square function on a grid table.
pub fn level_sets(e: &Expansion, table: &ValueTable, lambda: f64, r: f64) -> LevelSets {
    let sf = square_function(e, table);
    let ecells: Vec<bool> = sf.values.iter().map(|v| *v > lambda).collect();
    let ind = GridFunction::new(ecells.iter().map(|&x| if x { 1.0 } else { 0.0 }).collect());
    let bcells: Vec<bool> = hl_maximal(&ind).values.iter().map(|v| *v > r).collect();
    let h = 1.0 / ecells.len() as f64;
    let measure = |s: &[bool]| s.iter().filter(|&&x| x).count() as f64 * h;
    LevelSets {
        lambda,
        r,
        included: ecells.iter().zip(&bcells).all(|(e, b)| !e || *b),
        e_measure: measure(&ecells),
        b_measure: measure(&bcells),
        e: ecells,
        b: bcells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{random_admissible, Law};
    use crate::ortho::OrthoSystem;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn half_indicator_at_three_quarters() {
        let g = GridFunction::new(vec![1.0, 0.0]);
        let m = hl_maximal(&g);
        assert_abs_diff_eq!(m.values[1], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.values[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn constants_are_fixed() {
        let m = hl_maximal(&GridFunction::new(vec![-2.5; 37]));
        assert!(m.values.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    proptest! {
        #[test]
        fn hull_sweep_matches_enumeration(vals in proptest::collection::vec(-3.0f64..3.0, 1..40)) {
            let g = GridFunction::new(vals);
            let fast = hl_maximal(&g);
            let slow = hl_maximal_bruteforce(&g);
            for (i, (a, b)) in fast.values.iter().zip(&slow.values).enumerate() {
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0), "cell {}: {} vs {}", i, a, b);
                prop_assert!(*a >= g.values[i].abs());
            }
        }
    }

    fn setup() -> (OrthoSystem, ValueTable) {
        let seq = random_admissible(21, 3, 33, Law::UniformIid);
        let sys = OrthoSystem::build(&seq, 32).unwrap();
        let table = ValueTable::grid(&sys, 1024);
        (sys, table)
    }

    #[test]
    fn square_and_maximal_of_one_term() {
        let (sys, table) = setup();
        let m = sys.position(7).unwrap();
        let mut a = vec![0.0; sys.len()];
        a[m] = -1.5;
        let e = Expansion::new(a);
        let sf = square_function(&e, &table);
        let mf = maximal_function(&e, &table);
        for i in (0..table.len()).step_by(37) {
            let v = 1.5 * table.row(i)[m].abs();
            assert_abs_diff_eq!(sf.values[i], v, epsilon = 1e-12);
            assert_abs_diff_eq!(mf.values[i], v, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_function_ignores_signs() {
        let (sys, table) = setup();
        let a: Vec<f64> = (0..sys.len()).map(|m| (m as f64).cos()).collect();
        let eps: Vec<f64> = (0..sys.len())
            .map(|m| if m % 3 == 0 { -1.0 } else { 1.0 })
            .collect();
        let e = Expansion::new(a);
        assert_eq!(
            square_function(&e, &table),
            square_function(&e.flipped(&eps), &table)
        );
        let f = table.combine(&e.coeffs);
        let mf = maximal_function(&e, &table);
        assert!(mf.values.iter().zip(&f).all(|(m, v)| *m >= v.abs() - 1e-12));
    }

    #[test]
    fn level_set_extremes() {
        let (sys, table) = setup();
        let a: Vec<f64> = (0..sys.len()).map(|m| 1.0 / (1.0 + m as f64)).collect();
        let e = Expansion::new(a);
        let sf = square_function(&e, &table);
        let high = level_sets(&e, &table, sf.max() + 1.0, 0.5);
        assert_eq!(high.e_measure, 0.0);
        assert_eq!(high.b_measure, 0.0);
        let low = level_sets(&e, &table, 1e-300, 0.5);
        assert_eq!(low.e_measure, 1.0);
        assert_eq!(low.b_measure, 1.0);
        let mut sorted = sf.values.clone();
        sorted.sort_by(f64::total_cmp);
        let mid = level_sets(&e, &table, sorted[sorted.len() / 2], 0.5);
        assert!(mid.included);
        assert!(mid.b_measure >= mid.e_measure);
    }
}
