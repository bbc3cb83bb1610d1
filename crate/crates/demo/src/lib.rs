//! Browser front end: JSON in, JSON out. The plain functions here are what
//! the wasm exports wrap, so they also run natively.

use num_complex::Complex64;
use rootseries::problem::{CoeffRow, EvalRow, ProblemSpec};
use rootseries::verify::{geometric_grid, TrackReport};
use serde::Serialize;

/// Largest order the page will ask for; keeps a click under a second.
pub const MAX_ORDER: u32 = 8;

#[derive(Serialize)]
struct Table {
    order: u32,
    coefficients: Vec<CoeffRow>,
}

#[derive(Serialize)]
struct CurvePoint {
    scale: f64,
    error: f64,
}

#[derive(Serialize)]
struct Curve {
    order: u32,
    slope: Option<f64>,
    floor: f64,
    passed: bool,
    points: Vec<CurvePoint>,
}

#[derive(Serialize)]
struct Comparison {
    order: u32,
    rows: Vec<EvalRow>,
}

fn parse(spec: &str, order: u32) -> Result<ProblemSpec, String> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(format!("order must be between 1 and {MAX_ORDER}"));
    }
    ProblemSpec::from_json(spec).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Taylor coefficients up to `order` in graded order.
pub fn coefficient_table(spec: &str, order: u32) -> Result<String, String> {
    let spec = parse(spec, order)?;
    let coefficients = spec.coefficients(order, 53).map_err(|e| e.to_string())?;
    to_json(&Table {
        order,
        coefficients,
    })
}

/// For each order `1..=max_order`, the series error against the tracked
/// root along `a = s * (1, .., 1)` for `count` values of `s` between `lo`
/// and `hi`, with the fitted slope.
pub fn truncation_curves(
    spec: &str,
    max_order: u32,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<String, String> {
    let mut spec = parse(spec, max_order)?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err("need 0 < lo < hi".into());
    }
    spec.mode = rootseries::problem::Mode::Numeric;
    let direction = vec![Complex64::new(1.0, 0.0); spec.gammas.len()];
    let scales = geometric_grid(lo, hi, count);
    let curves = (1..=max_order)
        .map(|n| {
            let r: TrackReport = spec
                .convergence(n, 53, &direction, &scales)
                .map_err(|e| e.to_string())?;
            Ok(Curve {
                order: n,
                slope: r.slope,
                floor: r.floor,
                passed: r.passed,
                points: r
                    .samples
                    .iter()
                    .map(|s| CurvePoint {
                        scale: s.scale,
                        error: s.error,
                    })
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_json(&curves)
}

/// Series value and tracked root at each a-value of the spec.
pub fn series_vs_newton(spec: &str, order: u32) -> Result<String, String> {
    let mut spec = parse(spec, order)?;
    spec.mode = rootseries::problem::Mode::Numeric;
    let rows = spec.evaluate(order, 53).map_err(|e| e.to_string())?;
    to_json(&Comparison { order, rows })
}

#[cfg(target_arch = "wasm32")]
mod exports {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = coefficientTable)]
    pub fn coefficient_table(spec: &str, order: u32) -> Result<String, JsError> {
        super::coefficient_table(spec, order).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = truncationCurves)]
    pub fn truncation_curves(
        spec: &str,
        max_order: u32,
        lo: f64,
        hi: f64,
        count: usize,
    ) -> Result<String, JsError> {
        super::truncation_curves(spec, max_order, lo, hi, count).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = seriesVsNewton)]
    pub fn series_vs_newton(spec: &str, order: u32) -> Result<String, JsError> {
        super::series_vs_newton(spec, order).map_err(|e| JsError::new(&e))
    }
}
