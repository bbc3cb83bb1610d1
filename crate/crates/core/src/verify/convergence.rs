use num_complex::Complex64;
use serde::Serialize;

use super::newton::NewtonProblem;
use crate::error::{Error, Result};
use crate::numeric::NumScalar;
use crate::series::{series_eval_with, NumericEngine};

/// Minimum number of samples for a slope fit.
pub const MIN_SAMPLES: usize = 6;

/// One point of a truncation-error scan.
#[derive(Debug, Clone, Serialize)]
pub struct TrackSample {
    /// `max_i |a_i|`.
    pub scale: f64,
    pub a: Vec<Complex64>,
    pub newton: Complex64,
    pub series: Complex64,
    pub error: f64,
    pub iterations: usize,
}

/// Log-log fit of series truncation error against `|a|`.
#[derive(Debug, Clone, Serialize)]
pub struct TrackReport {
    pub order: u32,
    pub precision: u32,
    pub samples: Vec<TrackSample>,
    /// `None` when every error is at the working precision floor.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Root mean square residual of the fit in `log10` units.
    pub fit_residual: Option<f64>,
    pub floor: f64,
    pub passed: bool,
}

/// `count` points from `lo` to `hi`, evenly spaced in `log |a|`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Least squares `y = slope x + intercept`; returns the rms residual too.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Compares the order-`order` series with tracked roots along
/// `a = s * direction` for each `s` in `scales`, and fits the error slope.
/// Passes when the slope is at least `order + 1/2`, or when the series is
/// exact to working precision.
pub fn convergence_order_fit<T: NumScalar>(
    eng: &NumericEngine<T>,
    problem: &NewtonProblem<T>,
    gammas: &[T],
    direction: &[Complex64],
    order: u32,
    scales: &[f64],
) -> Result<TrackReport> {
    if scales.len() < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "slope fit needs at least {MIN_SAMPLES} samples, got {}",
            scales.len()
        )));
    }
    let dmax = direction.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dmax.is_nan() || dmax == 0.0 {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    let prec = eng.precision();
    let eps = 2f64.powi(-(prec as i32));
    let alpha = eng.alpha().norm();
    let floor = 64.0 * eps * alpha.max(1.0);
    let tol = (eps * 4.0).max(f64::MIN_POSITIVE) * alpha.max(1.0);

    let mut samples = Vec::with_capacity(scales.len());
    for &s in scales {
        let a: Vec<Complex64> = direction.iter().map(|d| d / dmax * s).collect();
        let at: Vec<T> = a.iter().map(|z| T::from_c64(*z, prec)).collect();
        let root = problem.track(&at, tol)?;
        let series = series_eval_with(eng, gammas, &at, order)?;
        let error = (root.z.clone() - series.clone()).norm();
        samples.push(TrackSample {
            scale: s,
            a,
            newton: root.z.to_c64(),
            series: series.to_c64(),
            error,
            iterations: root.iterations,
        });
    }

    let mut report = TrackReport {
        order,
        precision: prec,
        samples,
        slope: None,
        intercept: None,
        fit_residual: None,
        floor,
        passed: true,
    };
    if report.samples.iter().all(|s| s.error <= floor) {
        return Ok(report);
    }
    let x: Vec<f64> = report.samples.iter().map(|s| s.scale.log10()).collect();
    let y: Vec<f64> = report
        .samples
        .iter()
        .map(|s| s.error.max(floor).log10())
        .collect();
    let (slope, intercept, res) = fit_line(&x, &y);
    report.slope = Some(slope);
    report.intercept = Some(intercept);
    report.fit_residual = Some(res);
    report.passed = slope >= order as f64 + 0.5;
    Ok(report)
}
