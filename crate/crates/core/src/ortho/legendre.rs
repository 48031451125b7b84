//! Local `L^2` projection onto polynomials of order `k` on an interval.

use crate::bspline::QuadratureRule;
use crate::error::{Error, Result};

/// Panels of the composite Gauss rule used for inner products.
pub const DEFAULT_PANELS: usize = 16;

/// `sum_j coeffs[j] l_j^V` where `l_j^V(x) = sqrt(2 / |V|) P_j(u)` and `u`
/// maps `V` affinely onto `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPolynomial {
    pub interval: (f64, f64),
    pub coeffs: Vec<f64>,
}

/// Legendre polynomials `P_0(u), ..., P_{n-1}(u)`.
fn legendre_values(u: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    for j in 0..n {
        let v = match j {
            0 => 1.0,
            1 => u,
            _ => {
                let jf = j as f64;
                ((2.0 * jf - 1.0) * u * out[j - 1] - (jf - 1.0) * out[j - 2]) / jf
            }
        };
        out.push(v);
    }
}

impl LocalPolynomial {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.interval;
        let u = (2.0 * x - a - b) / (b - a);
        let mut p = Vec::with_capacity(self.order());
        legendre_values(u, self.order(), &mut p);
        let scale = (2.0 / (b - a)).sqrt();
        scale * p.iter().zip(&self.coeffs).map(|(p, c)| p * c).sum::<f64>()
    }

    /// `||T f||_{L^p(V)}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        function_lp_norm(|x| self.eval(x), self.interval, p, DEFAULT_PANELS)
    }
}

/// `T_V f = sum_{j<k} (2j + 1)/2 <f, l_j^V> l_j^V`, with the inner products
/// taken by a composite Gauss rule of [`DEFAULT_PANELS`] panels.
pub fn legendre_projection(
    f: impl Fn(f64) -> f64,
    v: (f64, f64),
    k: usize,
) -> Result<LocalPolynomial> {
    legendre_projection_with(f, v, k, DEFAULT_PANELS)
}

pub fn legendre_projection_with(
    f: impl Fn(f64) -> f64,
    v: (f64, f64),
    k: usize,
    panels: usize,
) -> Result<LocalPolynomial> {
    let (a, b) = v;
    if !(b > a) {
        return Err(Error::EmptyInterval(a, b));
    }
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    let rule = QuadratureRule::gauss_legendre(k + 4);
    let scale = (2.0 / (b - a)).sqrt();
    let h = (b - a) / panels.max(1) as f64;
    let mut inner = vec![0.0; k];
    let mut p = Vec::with_capacity(k);
    for i in 0..panels.max(1) {
        let lo = a + i as f64 * h;
        for (x, w) in rule.on(lo, lo + h) {
            let fx = f(x);
            legendre_values((2.0 * x - a - b) / (b - a), k, &mut p);
            for (acc, pj) in inner.iter_mut().zip(&p) {
                *acc += w * fx * scale * pj;
            }
        }
    }
    let coeffs = inner
        .iter()
        .enumerate()
        .map(|(j, ip)| (2 * j + 1) as f64 / 2.0 * ip)
        .collect();
    Ok(LocalPolynomial {
        interval: v,
        coeffs,
    })
}

/// `||f||_{L^p(a, b)}` by a composite Gauss rule, or by dense sampling for
/// `p = inf`.
pub fn function_lp_norm(f: impl Fn(f64) -> f64, v: (f64, f64), p: f64, panels: usize) -> f64 {
    let (a, b) = v;
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    if p.is_infinite() {
        let m = 64 * panels;
        return (0..=m)
            .map(|i| f(a + (b - a) * i as f64 / m as f64).abs())
            .fold(0.0, f64::max);
    }
    let rule = QuadratureRule::gauss_legendre(12);
    let mut acc = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        acc += rule.integrate(lo, lo + h, |x| f(x).abs().powf(p));
    }
    acc.powf(1.0 / p)
}
