//! Values of every system function at a fixed set of weighted points.

use crate::bspline::{BasisEvaluator, QuadratureRule};
use crate::ortho::OrthoSystem;

/// `values[i * width + m] = f_m(points[i])`, plus integration weights.
#[derive(Debug, Clone)]
pub struct ValueTable {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    width: usize,
    values: Vec<f64>,
}

impl ValueTable {
    fn from_points(system: &OrthoSystem, pts: Vec<(usize, f64, f64)>) -> ValueTable {
        let width = system.len();
        let mut values = vec![0.0; pts.len() * width];
        let mut ev = BasisEvaluator::new(system.order());
        for (row, &(mu, x, _)) in values.chunks_mut(width).zip(&pts) {
            system.values_in_span(&mut ev, mu, x, row);
        }
        ValueTable {
            points: pts.iter().map(|p| p.1).collect(),
            weights: pts.iter().map(|p| p.2).collect(),
            width,
            values,
        }
    }

    /// `q` Gauss nodes on every knot interval of the finest partition;
    /// integrates products of two system functions exactly for `q >= k`.
    pub fn gauss(system: &OrthoSystem, q: usize) -> ValueTable {
        let rule = QuadratureRule::gauss_legendre(q);
        let pts = system
            .partition()
            .intervals()
            .flat_map(|(mu, a, b)| {
                rule.on(a, b)
                    .map(move |(x, w)| (mu, x, w))
                    .collect::<Vec<_>>()
            })
            .collect();
        ValueTable::from_points(system, pts)
    }

    /// Midpoints `(i + 1/2) / g` of a uniform grid with weights `1 / g`.
    pub fn grid(system: &OrthoSystem, g: usize) -> ValueTable {
        let part = system.partition();
        let pts = (0..g)
            .map(|i| {
                let x = (i as f64 + 0.5) / g as f64;
                (
                    part.span_index(x).expect("inside [0, 1]"),
                    x,
                    1.0 / g as f64,
                )
            })
            .collect();
        ValueTable::from_points(system, pts)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    /// Values of `sum_m a[m] f_m` at every point.
    pub fn combine(&self, a: &[f64]) -> Vec<f64> {
        self.values
            .chunks(self.width)
            .map(|row| row.iter().zip(a).map(|(v, c)| v * c).sum())
            .collect()
    }

    /// `(sum_i w_i |v_i|^p)^{1/p}`, or `max |v_i|` for `p = inf`.
    pub fn lp_norm(&self, v: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return v.iter().fold(0.0, |m, x| m.max(x.abs()));
        }
        if p == 2.0 {
            return self
                .weights
                .iter()
                .zip(v)
                .map(|(w, x)| w * x * x)
                .sum::<f64>()
                .sqrt();
        }
        self.weights
            .iter()
            .zip(v)
            .map(|(w, x)| w * x.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}
