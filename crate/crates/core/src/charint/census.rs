//! How many characteristic intervals fill a given window.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ortho::OrthoSystem;

/// Largest census over all windows with endpoints in the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub beta: f64,
    pub max_count: usize,
    pub argmax_window: [f64; 2],
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=0.5).contains(&beta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "beta = {beta} must lie in [0, 1/2]"
        )))
    }
}

fn fills(j: (f64, f64), x: f64, y: f64, beta: f64) -> bool {
    x <= j.0 && j.1 <= y && (1.0 - beta) * (y - x) <= j.1 - j.0
}

/// `#{n <= N : J_n in [x, y], |J_n| >= (1 - beta)(y - x)}`, where the
/// polynomial entries count with `J_n = [0, 1]`.
pub fn char_multiplicity_census(system: &OrthoSystem, x: f64, y: f64, beta: f64) -> Result<usize> {
    check_beta(beta)?;
    for v in [x, y] {
        if !system.sequence().contains(v) {
            return Err(Error::NotAKnot(v));
        }
    }
    if x >= y {
        return Err(Error::EmptyInterval(x, y));
    }
    Ok(system
        .intervals()
        .iter()
        .filter(|&&j| fills(j, x, y, beta))
        .count())
}

/// Maximizes the census over every window `[x, y]` with `x < y` taken from
/// the sequence. Ties go to the leftmost, then shortest, window.
pub fn census_sweep(system: &OrthoSystem, beta: f64) -> Result<CensusReport> {
    check_beta(beta)?;
    let mut pts = system.sequence().points().to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let index = |v: f64| pts.partition_point(|&p| p < v);
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for &(a, b) in system.intervals() {
        let (ia, ib) = (index(a), index(b));
        for ix in (0..=ia).rev() {
            let x = pts[ix];
            if !fills((a, b), x, b, beta) {
                break;
            }
            for &y in &pts[ib..] {
                if !fills((a, b), x, y, beta) {
                    break;
                }
                *counts.entry((ix, index(y))).or_default() += 1;
            }
        }
    }
    let best = counts
        .into_iter()
        .max_by(|(ka, ca), (kb, cb)| ca.cmp(cb).then(kb.cmp(ka)))
        .ok_or_else(|| Error::InvalidParameter("system has no characteristic intervals".into()))?;
    let ((ix, iy), max_count) = best;
    Ok(CensusReport {
        k: system.order(),
        n: system.level(),
        beta,
        max_count,
        argmax_window: [pts[ix], pts[iy]],
    })
}
