//! Three operations for the browser page. Each takes plain numbers and
//! returns a JSON string, so the page needs no generated type bindings.

use orthosplines::analysis::{
    hl_maximal, maximal_function, square_function, CoefficientMode, Expansion, GridFunction,
    TrialDraw, ValueTable,
};
use orthosplines::bspline::GramSystem;
use orthosplines::gram::{decay_profile, offset_maxima};
use orthosplines::knots::{partition_at, random_admissible, Law};
use orthosplines::{KnotSequence, OrthoSystem};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Hard cap on `N` so a slider cannot freeze the tab.
pub const MAX_LEVEL: usize = 400;
/// Hard cap on plot samples.
pub const MAX_SAMPLES: usize = 4096;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub level: i64,
    pub interval: [f64; 2],
    pub values: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct CurvesView {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub knots: Vec<f64>,
    pub xs: Vec<f64>,
    pub curves: Vec<Curve>,
}

#[derive(Debug, Serialize)]
pub struct DecayView {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub offsets: Vec<f64>,
    pub gamma: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Debug, Serialize)]
pub struct MaximalView {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub xs: Vec<f64>,
    pub f: Vec<f64>,
    pub square: Vec<f64>,
    pub maximal: Vec<f64>,
    pub hardy_littlewood: Vec<f64>,
}

fn law_of(dyadic: bool) -> Law {
    if dyadic {
        Law::DyadicShuffled
    } else {
        Law::UniformIid
    }
}

fn sequence(k: usize, n: usize, seed: u64, dyadic: bool) -> Result<KnotSequence, String> {
    if !(1..=8).contains(&k) {
        return Err(format!("order k = {k} must lie in 1..=8"));
    }
    if !(1..=MAX_LEVEL).contains(&n) {
        return Err(format!("level N = {n} must lie in 1..={MAX_LEVEL}"));
    }
    Ok(random_admissible(seed, k, n + 1, law_of(dyadic)))
}

/// Samples the functions of levels `first..=N` (0 and below are the
/// polynomial entries) on a uniform grid.
pub fn curves(
    k: usize,
    n: usize,
    seed: u64,
    dyadic: bool,
    first: i64,
    samples: usize,
) -> Result<CurvesView, String> {
    let seq = sequence(k, n, seed, dyadic)?;
    let system = OrthoSystem::build(&seq, n).map_err(|e| e.to_string())?;
    let samples = samples.clamp(2, MAX_SAMPLES);
    let xs: Vec<f64> = (0..samples)
        .map(|i| i as f64 / (samples - 1) as f64)
        .collect();
    let from = system
        .position(first.clamp(system.index_at(0), n as i64))
        .map_err(|e| e.to_string())?;
    let mut curves = Vec::new();
    for m in from..system.len() {
        let s = system.spline(m);
        let values = xs.iter().map(|&x| s.eval(x).unwrap_or(f64::NAN)).collect();
        let (a, b) = system.intervals()[m];
        curves.push(Curve {
            level: system.index_at(m),
            interval: [a, b],
            values,
        });
    }
    let knots = seq.points()[2..=n.max(1)].to_vec();
    Ok(CurvesView {
        k,
        n,
        knots,
        xs,
        curves,
    })
}

/// Weighted off-diagonal maxima of the Gram inverse with the fitted envelope.
pub fn decay(k: usize, n: usize, seed: u64, dyadic: bool) -> Result<DecayView, String> {
    let seq = sequence(k, n, seed, dyadic)?;
    let part = partition_at(&seq, n).map_err(|e| e.to_string())?;
    let g = GramSystem::with_inverse(&part).map_err(|e| e.to_string())?;
    let offsets = offset_maxima(&g).map_err(|e| e.to_string())?;
    let (gamma, c) = match decay_profile(&g) {
        Ok(d) => (d.gamma_hat, d.c_hat),
        Err(_) => (f64::NAN, f64::NAN),
    };
    Ok(DecayView {
        k,
        n,
        offsets,
        gamma,
        c,
    })
}

/// A random expansion with its square function, partial-sum maximal
/// function and Hardy-Littlewood maximal function on a uniform grid.
pub fn maximal(
    k: usize,
    n: usize,
    seed: u64,
    dyadic: bool,
    grid: usize,
) -> Result<MaximalView, String> {
    let seq = sequence(k, n, seed, dyadic)?;
    let system = OrthoSystem::build(&seq, n).map_err(|e| e.to_string())?;
    let grid = grid.clamp(16, MAX_SAMPLES);
    let table = ValueTable::grid(&system, grid);
    let draw = TrialDraw::draw(seed, 0, system.len(), CoefficientMode::Dense);
    let e = Expansion::new(draw.coeffs);
    let f = table.combine(&e.coeffs);
    let hl = hl_maximal(&GridFunction::new(f.clone()));
    Ok(MaximalView {
        k,
        n,
        xs: table.points.clone(),
        square: square_function(&e, &table).values,
        maximal: maximal_function(&e, &table).values,
        hardy_littlewood: hl.values,
        f,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = orthoCurves)]
pub fn ortho_curves_js(
    k: usize,
    n: usize,
    seed: u32,
    dyadic: bool,
    first: i32,
    samples: usize,
) -> Result<String, JsValue> {
    to_js(curves(k, n, seed as u64, dyadic, first as i64, samples))
}

#[wasm_bindgen(js_name = gramDecay)]
pub fn gram_decay_js(k: usize, n: usize, seed: u32, dyadic: bool) -> Result<String, JsValue> {
    to_js(decay(k, n, seed as u64, dyadic))
}

#[wasm_bindgen(js_name = maximalFunctions)]
pub fn maximal_functions_js(
    k: usize,
    n: usize,
    seed: u32,
    dyadic: bool,
    grid: usize,
) -> Result<String, JsValue> {
    to_js(maximal(k, n, seed as u64, dyadic, grid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_cover_requested_levels() {
        let v = curves(2, 10, 3, false, 8, 65).unwrap();
        assert_eq!(v.curves.len(), 3);
        assert_eq!(v.curves[0].level, 8);
        assert_eq!(v.xs.len(), 65);
        assert!(v
            .curves
            .iter()
            .all(|c| c.values.iter().all(|y| y.is_finite())));
    }

    #[test]
    fn bad_order_is_rejected() {
        assert!(curves(0, 10, 0, false, 0, 10).is_err());
        assert!(decay(2, MAX_LEVEL + 1, 0, false).is_err());
    }
}
