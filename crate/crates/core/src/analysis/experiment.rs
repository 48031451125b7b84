//! Random sign flips of in-space expansions.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::table::ValueTable;
use crate::bspline::spline::norm_nodes;
use crate::error::{Error, Result};
use crate::knots::KnotSequence;
use crate::ortho::OrthoSystem;

/// How the coefficients of a random in-space function are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientMode {
    /// Every `a_n` iid standard normal.
    #[default]
    Dense,
    /// Standard normal on `ceil(sqrt(L))` of the `L` positions, zero elsewhere.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub k: usize,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Over trials of `||sum eps_n a_n f_n||_p / ||f||_p`.
    pub ratio_max: f64,
    pub ratio_min: f64,
    pub ratio_q95: f64,
    /// Over trials of `||Sf||_p / ||f||_p`.
    pub sq_ratio_max: f64,
    pub sq_ratio_min: f64,
    /// Number of quadrature points carrying the norms.
    pub grid: usize,
}

/// Coefficients and signs of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    pub coeffs: Vec<f64>,
    pub signs: Vec<f64>,
}

impl TrialDraw {
    /// Trial `trial` of the run seeded by `seed`; each trial has its own
    /// ChaCha stream so trials can run in any order.
    pub fn draw(seed: u64, trial: u64, len: usize, mode: CoefficientMode) -> TrialDraw {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut coeffs: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        if mode == CoefficientMode::Sparse {
            let keep = ((len as f64).sqrt().ceil() as usize).min(len);
            let mut mask = vec![false; len];
            for i in sample(&mut rng, len, keep) {
                mask[i] = true;
            }
            for (c, m) in coeffs.iter_mut().zip(mask) {
                if !m {
                    *c = 0.0;
                }
            }
        }
        let signs = (0..len)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        TrialDraw { coeffs, signs }
    }
}

/// Norms of `f`, `T_eps f` and `Sf` for one draw, per exponent.
fn trial_ratios(table: &ValueTable, d: &TrialDraw, ps: &[f64]) -> Vec<(f64, f64)> {
    let mut fv = Vec::with_capacity(table.len());
    let mut tv = Vec::with_capacity(table.len());
    let mut sv = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let (mut f, mut t, mut s) = (0.0, 0.0, 0.0);
        for ((v, a), e) in table.row(i).iter().zip(&d.coeffs).zip(&d.signs) {
            let av = a * v;
            f += av;
            t += e * av;
            s += av * av;
        }
        fv.push(f);
        tv.push(t);
        sv.push(s.sqrt());
    }
    ps.iter()
        .map(|&p| {
            let nf = table.lp_norm(&fv, p);
            (table.lp_norm(&tv, p) / nf, table.lp_norm(&sv, p) / nf)
        })
        .collect()
}

/// `||T_eps f||_p / ||f||_p` on a prepared table.
pub fn sign_flip_ratio(table: &ValueTable, coeffs: &[f64], signs: &[f64], p: f64) -> f64 {
    let d = TrialDraw {
        coeffs: coeffs.to_vec(),
        signs: signs.to_vec(),
    };
    trial_ratios(table, &d, &[p])[0].0
}

fn quantile_95(sorted: &[f64]) -> f64 {
    let idx = ((0.95 * sorted.len() as f64).ceil() as usize).max(1) - 1;
    sorted[idx]
}

/// The experiment for several exponents on one built system. Norms are
/// taken with `k + 2` Gauss nodes per knot interval of the finest
/// partition.
pub fn uncond_experiment_on(
    system: &OrthoSystem,
    ps: &[f64],
    trials: usize,
    seed: u64,
    mode: CoefficientMode,
) -> Result<Vec<ExperimentReport>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    for &p in ps {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exponent p = {p} must lie in (1, inf)"
            )));
        }
    }
    let table = ValueTable::gauss(system, norm_nodes(system.order()));
    let run = |t: u64| trial_ratios(&table, &TrialDraw::draw(seed, t, system.len(), mode), ps);
    #[cfg(feature = "parallel")]
    let per_trial: Vec<Vec<(f64, f64)>> = {
        use rayon::prelude::*;
        (0..trials as u64).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_trial: Vec<Vec<(f64, f64)>> = (0..trials as u64).map(run).collect();
    Ok(ps
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut r: Vec<f64> = per_trial.iter().map(|v| v[i].0).collect();
            let s: Vec<f64> = per_trial.iter().map(|v| v[i].1).collect();
            r.sort_by(f64::total_cmp);
            ExperimentReport {
                k: system.order(),
                p,
                n: system.level(),
                trials,
                seed,
                ratio_max: r[r.len() - 1],
                ratio_min: r[0],
                ratio_q95: quantile_95(&r),
                sq_ratio_max: s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                sq_ratio_min: s.iter().copied().fold(f64::INFINITY, f64::min),
                grid: table.len(),
            }
        })
        .collect())
}

pub fn uncond_experiment(
    seq: &KnotSequence,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let system = OrthoSystem::build(seq, n)?;
    Ok(uncond_experiment_on(&system, &[p], trials, seed, CoefficientMode::Dense)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{random_admissible, Law};
    use approx::assert_abs_diff_eq;

    fn system() -> OrthoSystem {
        OrthoSystem::build(&random_admissible(2, 3, 41, Law::UniformIid), 40).unwrap()
    }

    #[test]
    fn identity_signs_give_one() {
        let sys = system();
        let table = ValueTable::gauss(&sys, 5);
        let d = TrialDraw::draw(1, 0, sys.len(), CoefficientMode::Dense);
        let ones = vec![1.0; sys.len()];
        for p in [1.2, 3.0] {
            assert_eq!(sign_flip_ratio(&table, &d.coeffs, &ones, p), 1.0);
        }
    }

    #[test]
    fn isometry_at_two() {
        let sys = system();
        let r = uncond_experiment_on(&sys, &[2.0], 30, 4, CoefficientMode::Dense).unwrap();
        assert_abs_diff_eq!(r[0].ratio_max, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r[0].ratio_min, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r[0].sq_ratio_max, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn deterministic_and_ordered() {
        let sys = system();
        let a = uncond_experiment_on(&sys, &[1.5, 6.0], 20, 9, CoefficientMode::Sparse).unwrap();
        let b = uncond_experiment_on(&sys, &[1.5, 6.0], 20, 9, CoefficientMode::Sparse).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(r.ratio_min <= r.ratio_q95 && r.ratio_q95 <= r.ratio_max);
        }
        let d = TrialDraw::draw(9, 3, sys.len(), CoefficientMode::Sparse);
        let nonzero = d.coeffs.iter().filter(|c| **c != 0.0).count();
        assert_eq!(nonzero, (sys.len() as f64).sqrt().ceil() as usize);
    }

    #[test]
    fn bad_parameters() {
        let sys = system();
        assert!(uncond_experiment_on(&sys, &[1.0], 5, 0, CoefficientMode::Dense).is_err());
        assert!(uncond_experiment_on(&sys, &[2.0], 0, 0, CoefficientMode::Dense).is_err());
    }
}
