//! The orthonormal polynomials that open the system.

use serde::{Deserialize, Serialize};

/// `L^2[0, 1]`-orthonormal polynomials of degrees `0..k`; entry `m` is the
/// system function with index `n = m - k + 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialBlock {
    /// Monomial coefficients, lowest degree first.
    coeffs: Vec<Vec<f64>>,
}

/// Normalized shifted Legendre polynomials
/// `sqrt(2m + 1) sum_i (-1)^{m+i} C(m, i) C(m+i, i) x^i`.
pub fn initial_block(k: usize) -> PolynomialBlock {
    let coeffs = (0..k)
        .map(|m| {
            let scale = ((2 * m + 1) as f64).sqrt();
            (0..=m)
                .map(|i| {
                    let sign = if (m + i) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(m, i) * binomial(m + i, i) * scale
                })
                .collect()
        })
        .collect();
    PolynomialBlock { coeffs }
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl PolynomialBlock {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self, m: usize) -> &[f64] {
        &self.coeffs[m]
    }

    /// Value of entry `m` at `x`, by the three-term Legendre recurrence in
    /// `u = 2x - 1` (the monomial form cancels badly for large `m`).
    pub fn eval(&self, m: usize, x: f64) -> f64 {
        let u = 2.0 * x - 1.0;
        let (mut prev, mut cur) = (0.0, 1.0);
        for j in 1..=m {
            let jf = j as f64;
            let next = ((2.0 * jf - 1.0) * u * cur - (jf - 1.0) * prev) / jf;
            prev = cur;
            cur = next;
        }
        ((2 * m + 1) as f64).sqrt() * cur
    }
}
