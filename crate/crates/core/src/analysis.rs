//! Post-processing of time series: log-linear exponential fits, first-maximum
//! extraction and window statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MIN_FIT_SAMPLES: usize = 10;
/// Grid points this close to a window edge count as inside.
const WINDOW_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    /// rms of `y - (intercept + slope x)`
    pub rms_residual: f64,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!("length mismatch {} vs {}", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {n}")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    let sigma2 = ss_res / (nf - 2.0);
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr: (sigma2 / sxx).sqrt(),
        intercept_stderr: (sigma2 * (1.0 / nf + mx * mx / sxx)).sqrt(),
        rms_residual: (ss_res / nf).sqrt(),
    })
}

/// `A e^{-rate t}` fitted on `window`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFit {
    pub prefactor: f64,
    pub rate: f64,
    pub window: (f64, f64),
    /// rms of the log residuals
    pub residual: f64,
    pub prefactor_stddev: f64,
    pub rate_stddev: f64,
    pub samples: usize,
}

fn window_indices(times: &[f64], window: (f64, f64)) -> Result<Vec<usize>> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Fit(format!("degenerate window [{lo}, {hi}]")));
    }
    Ok(times
        .iter()
        .enumerate()
        .filter(|(_, &t)| t >= lo - WINDOW_SLACK && t <= hi + WINDOW_SLACK)
        .map(|(i, _)| i)
        .collect())
}

/// Least squares of `ln(values)` against `times` inside `window`.
pub fn fit_exponential(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<ExpFit> {
    if times.len() != values.len() {
        return Err(Error::Fit("times and values differ in length".into()));
    }
    let idx = window_indices(times, window)?;
    if idx.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples in window, need {MIN_FIT_SAMPLES}",
            idx.len()
        )));
    }
    if let Some(&bad) = idx.iter().find(|&&i| !(values[i] > 0.0)) {
        return Err(Error::Fit(format!("non-positive sample {} at t = {}", values[bad], times[bad])));
    }
    let x: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
    let y: Vec<f64> = idx.iter().map(|&i| values[i].ln()).collect();
    let lin = linear_regression(&x, &y)?;
    let prefactor = lin.intercept.exp();
    Ok(ExpFit {
        prefactor,
        rate: -lin.slope,
        window,
        residual: lin.rms_residual,
        prefactor_stddev: prefactor * lin.intercept_stderr,
        rate_stddev: lin.slope_stderr,
        samples: idx.len(),
    })
}

/// First interior local maximum on the grid, refined by a parabola through
/// the three neighbouring samples.
pub fn first_maximum(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    first_maximum_above(times, values, 0.0)
}

/// Like [`first_maximum`] but ignores maxima below `floor * max |values|`,
/// so small early-time wiggles do not count. Invariant under positive
/// rescaling of `values`.
pub fn first_maximum_above(times: &[f64], values: &[f64], floor: f64) -> Result<(f64, f64)> {
    if times.len() != values.len() || times.len() < 3 {
        return Err(Error::Fit("need at least 3 equally long samples".into()));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if values.iter().all(|&v| v == values[0]) {
        return Err(Error::Fit("series is constant".into()));
    }
    let threshold = floor * scale;
    for i in 1..values.len() - 1 {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if b > a && b >= c && b >= threshold {
            return Ok(parabolic_peak([times[i - 1], times[i], times[i + 1]], [a, b, c]));
        }
    }
    Err(Error::Fit("no interior maximum".into()))
}

fn parabolic_peak(t: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (t[1] - t[0]);
    let d2 = (y[2] - y[1]) / (t[2] - t[1]);
    let curv = (d2 - d1) / (t[2] - t[0]);
    if curv >= 0.0 {
        return (t[1], y[1]);
    }
    // Newton form y0 + d1 (x - t0) + curv (x - t0)(x - t1)
    let peak = 0.5 * (t[0] + t[1]) - d1 / (2.0 * curv);
    let value = y[0] + d1 * (peak - t[0]) + curv * (peak - t[0]) * (peak - t[1]);
    (peak, value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub mean: f64,
    pub stddev: f64,
    pub samples: usize,
}

/// Sample mean and standard deviation over `window`.
pub fn plateau(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<Plateau> {
    plateau_excluding(times, values, window, None)
}

/// [`plateau`] with an optional sub-interval left out.
pub fn plateau_excluding(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    exclude: Option<(f64, f64)>,
) -> Result<Plateau> {
    let idx: Vec<usize> = window_indices(times, window)?
        .into_iter()
        .filter(|&i| exclude.is_none_or(|(lo, hi)| times[i] < lo || times[i] > hi))
        .collect();
    if idx.is_empty() {
        return Err(Error::Fit(format!("empty window [{}, {}]", window.0, window.1)));
    }
    let n = idx.len() as f64;
    let mean = idx.iter().map(|&i| values[i]).sum::<f64>() / n;
    let var = idx.iter().map(|&i| (values[i] - mean).powi(2)).sum::<f64>() / n;
    Ok(Plateau {
        mean,
        stddev: var.sqrt(),
        samples: idx.len(),
    })
}
