//! Localization of the orthonormal functions around their characteristic
//! intervals: norm bands, tail decay and pointwise envelopes.

use serde::{Deserialize, Serialize};

use crate::bspline::spline::{check_exponent, norm_nodes, sup_samples};
use crate::bspline::{lp_norm, BasisEvaluator, QuadratureRule, Spline};
use crate::charint::DistanceCounter;
use crate::error::Result;
use crate::ortho::OrthoSystem;

/// Range of `||phi_n||_{L^p(J_n)} / |J_n|^{1/p - 1/2}` (local) and
/// `||phi_n||_p / |J_n|^{1/p - 1/2}` (global) over `n = 2..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBand {
    pub p: f64,
    pub local_min: f64,
    pub local_max: f64,
    pub global_min: f64,
    pub global_max: f64,
}

impl NormBand {
    pub fn local_width(&self) -> f64 {
        self.local_max / self.local_min
    }

    pub fn global_width(&self) -> f64 {
        self.global_max / self.global_min
    }

    /// Smallest band containing both.
    pub fn merge(&self, other: &NormBand) -> NormBand {
        NormBand {
            p: self.p,
            local_min: self.local_min.min(other.local_min),
            local_max: self.local_max.max(other.local_max),
            global_min: self.global_min.min(other.global_min),
            global_max: self.global_max.max(other.global_max),
        }
    }
}

fn scale_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        -0.5
    } else {
        1.0 / p - 0.5
    }
}

pub fn norm_equivalence(system: &OrthoSystem, p: f64) -> Result<NormBand> {
    check_exponent(p)?;
    let mut band = NormBand {
        p,
        local_min: f64::INFINITY,
        local_max: 0.0,
        global_min: f64::INFINITY,
        global_max: 0.0,
    };
    for f in system.functions() {
        let (a, b) = f.char.interval;
        let s = (b - a).powf(scale_exponent(p));
        let local = lp_norm(&f.phi, p, a, b)? / s;
        let global = lp_norm(&f.phi, p, 0.0, 1.0)? / s;
        band.local_min = band.local_min.min(local);
        band.local_max = band.local_max.max(local);
        band.global_min = band.global_min.min(global);
        band.global_max = band.global_max.max(global);
    }
    Ok(band)
}

/// Largest tail ratio over the system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailAudit {
    pub k: usize,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: f64,
    pub ratio_max: f64,
    /// Number of `(n, x)` pairs that entered the maximum.
    pub samples: usize,
}

/// Envelopes below this value are at the level of rounding in `phi` and are
/// skipped.
pub const ENVELOPE_FLOOR: f64 = 1e-8;

/// `int_lo^hi |f|^p` on one knot interval, or `sup |f|` for `p = inf`.
fn piece(
    f: &Spline,
    ev: &mut BasisEvaluator,
    rule: &QuadratureRule,
    mu: usize,
    lo: f64,
    hi: f64,
    p: f64,
) -> f64 {
    if p.is_infinite() {
        let m = sup_samples(f.order());
        return (0..=m)
            .map(|i| {
                f.eval_in_span(ev, mu, lo + (hi - lo) * i as f64 / m as f64)
                    .abs()
            })
            .fold(0.0, f64::max);
    }
    rule.on(lo, hi)
        .map(|(x, w)| w * f.eval_in_span(ev, mu, x).abs().powf(p))
        .sum()
}

/// Half-cell pieces of `phi` in increasing order: `(left end, right end, mass)`.
fn half_pieces(f: &Spline, p: f64) -> Vec<(f64, f64, f64)> {
    let mut ev = BasisEvaluator::new(f.order());
    let rule = QuadratureRule::gauss_legendre(norm_nodes(f.order()));
    let mut out = Vec::new();
    for (mu, a, b) in f.partition().intervals() {
        let m = 0.5 * (a + b);
        out.push((a, m, piece(f, &mut ev, &rule, mu, a, m, p)));
        out.push((m, b, piece(f, &mut ev, &rule, mu, m, b, p)));
    }
    out
}

fn combine(acc: f64, v: f64, p: f64) -> f64 {
    if p.is_infinite() {
        acc.max(v)
    } else {
        acc + v
    }
}

fn finish(acc: f64, p: f64) -> f64 {
    if p.is_infinite() {
        acc
    } else {
        acc.powf(1.0 / p)
    }
}

/// Max over `n` and over knots and cell midpoints `x` outside `J_n` of
/// `||phi_n||_{L^p(tail)} (|J| + dist(x, J))^{1-1/p} / (gamma^{d_n(x)} |J|^{1/2})`,
/// where the tail is `(0, x)` left of `J` and `(x, 1)` right of it.
pub fn tail_decay_audit(system: &OrthoSystem, p: f64, gamma: f64) -> Result<TailAudit> {
    check_exponent(p)?;
    let dual = if p.is_infinite() { 1.0 } else { 1.0 - 1.0 / p };
    let mut audit = TailAudit {
        k: system.order(),
        p,
        n: system.level(),
        gamma,
        ratio_max: 0.0,
        samples: 0,
    };
    for f in system.functions() {
        let (ja, jb) = f.char.interval;
        let jl = jb - ja;
        let dc = DistanceCounter::new(f.phi.partition().knots(), (ja, jb));
        let pieces = half_pieces(&f.phi, p);
        let mut visit = |x: f64, mass: f64| -> Result<()> {
            let d = if gamma > 0.0 { dc.d_point(x)? } else { 0 };
            let env = gamma.powi(d as i32) * jl.sqrt();
            if env < ENVELOPE_FLOOR {
                return Ok(());
            }
            let dist = if x < ja { ja - x } else { x - jb };
            let ratio = finish(mass, p) * (jl + dist).powf(dual) / env;
            audit.ratio_max = audit.ratio_max.max(ratio);
            audit.samples += 1;
            Ok(())
        };
        let mut acc = 0.0;
        for &(_, hi, mass) in &pieces {
            acc = combine(acc, mass, p);
            if hi < ja {
                visit(hi, acc)?;
            }
        }
        let mut acc = 0.0;
        for &(lo, _, mass) in pieces.iter().rev() {
            acc = combine(acc, mass, p);
            if lo > jb {
                visit(lo, acc)?;
            }
        }
    }
    Ok(audit)
}

/// Max over `n` and knot intervals `I = [t_{j-1}, t_j]` of
/// `sup_I |phi_n| (|J| + dist(J, I) + |I|) / (gamma^{d_n(t_j)} |J|^{1/2})`.
pub fn sup_bound_audit(system: &OrthoSystem, gamma: f64) -> Result<TailAudit> {
    let mut audit = TailAudit {
        k: system.order(),
        p: f64::INFINITY,
        n: system.level(),
        gamma,
        ratio_max: 0.0,
        samples: 0,
    };
    let rule = QuadratureRule::gauss_legendre(1);
    for f in system.functions() {
        let (ja, jb) = f.char.interval;
        let jl = jb - ja;
        let dc = DistanceCounter::new(f.phi.partition().knots(), (ja, jb));
        let mut ev = BasisEvaluator::new(f.order());
        for (mu, a, b) in f.phi.partition().intervals() {
            let env = gamma.powi(dc.d_point(b)? as i32) * jl.sqrt();
            if env < ENVELOPE_FLOOR {
                continue;
            }
            let sup = piece(&f.phi, &mut ev, &rule, mu, a, b, f64::INFINITY);
            let dist = if b <= ja {
                ja - b
            } else if a >= jb {
                a - jb
            } else {
                0.0
            };
            audit.ratio_max = audit.ratio_max.max(sup * (jl + dist + (b - a)) / env);
            audit.samples += 1;
        }
    }
    Ok(audit)
}
