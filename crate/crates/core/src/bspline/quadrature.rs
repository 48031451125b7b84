//! Gauss–Legendre rules applied per knot interval.

use std::f64::consts::PI;

/// Gauss–Legendre rule on `[-1, 1]`; exact for polynomials of degree
/// `<= 2q - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss_legendre(q: usize) -> QuadratureRule {
        assert!(q >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; q];
        let mut weights = vec![0.0; q];
        let n = q as f64;
        for i in 0..q.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_q.
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(q, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(q, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[q - 1 - i] = x;
            weights[i] = w;
            weights[q - 1 - i] = w;
        }
        if q % 2 == 1 {
            nodes[q / 2] = 0.0;
        }
        QuadratureRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two() {
        for q in 1..=12 {
            let rule = QuadratureRule::gauss_legendre(q);
            assert_eq!(rule.len(), q);
            assert_relative_eq!(rule.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn exact_up_to_degree_2q_minus_1() {
        for q in 1..=10 {
            let rule = QuadratureRule::gauss_legendre(q);
            for deg in 0..2 * q {
                let got = rule.integrate(0.25, 1.5, |x| x.powi(deg as i32));
                let want = (1.5f64.powi(deg as i32 + 1) - 0.25f64.powi(deg as i32 + 1))
                    / (deg as f64 + 1.0);
                assert_relative_eq!(got, want, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn known_two_point_nodes() {
        let rule = QuadratureRule::gauss_legendre(2);
        assert_relative_eq!(rule.nodes()[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(rule.nodes()[0], -1.0 / 3f64.sqrt(), epsilon = 1e-15);
    }
}
