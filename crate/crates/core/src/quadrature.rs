//! Globally adaptive Gauss-Kronrod (7/15) integration on a finite interval,
//! with a dense composite-Simpson fallback checked by Richardson extrapolation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Number of equal pieces the interval is split into before adapting.
    /// Callers with oscillatory integrands set this from the expected number
    /// of oscillations.
    pub initial_pieces: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 20_000,
            initial_pieces: 1,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_pieces(mut self, pieces: usize) -> Self {
        self.initial_pieces = pieces.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive integral of `f` over `[a, b]`; falls back to dense Simpson when
/// the adaptive scheme exhausts its interval budget.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Integral> {
    match integrate_adaptive(&mut f, a, b, opts) {
        Ok(res) => Ok(res),
        Err(_) => integrate_dense(&mut f, a, b, opts.abs_tol.max(opts.rel_tol)),
    }
}

pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let pieces = opts.initial_pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces * 2);
    let (mut total, mut err) = (0.0, 0.0);
    for i in 0..pieces {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == pieces { b } else { lo + width };
        let seg = kronrod(f, lo, hi);
        total += seg.value;
        err += seg.error;
        heap.push(seg);
    }
    loop {
        let tolerance = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= tolerance {
            // re-sum to shed the drift of incremental updates
            let value = heap.iter().map(|s| s.value).sum();
            return Ok(Integral { value, error: err });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureNoConvergence {
                estimate: total,
                error: err,
                tolerance,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Err(Error::QuadratureNoConvergence {
                estimate: total,
                error: err,
                tolerance,
            });
        }
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

fn simpson<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Composite Simpson on `2^14` and `2^15` panels with a Richardson check.
pub fn integrate_dense<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    let coarse = simpson(f, a, b, 1 << 14);
    let fine = simpson(f, a, b, 1 << 15);
    let error = (fine - coarse).abs() / 15.0;
    let value = fine + (fine - coarse) / 15.0;
    if error <= tol && value.is_finite() {
        Ok(Integral { value, error })
    } else {
        Err(Error::QuadratureNoConvergence {
            estimate: value,
            error,
            tolerance: tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let res = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, QuadOptions::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((res.value - exact).abs() < 1e-13);
    }

    #[test]
    fn log_endpoint_singularity() {
        let res = integrate(|x: f64| x.ln(), 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((res.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn oscillatory_integrand() {
        let omega = 400.0;
        let opts = QuadOptions::default().with_pieces(64);
        let res = integrate(|x: f64| (omega * x).cos() * x.sin(), 0.0, PI, opts).unwrap();
        // int_0^pi cos(w x) sin x dx = (1 + cos(w pi)) / (1 - w^2)
        let exact = (1.0 + (omega * PI).cos()) / (1.0 - omega * omega);
        assert!((res.value - exact).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_intervals: 4,
            initial_pieces: 1,
        };
        let mut f = |x: f64| (1.0 / x).sin();
        assert!(matches!(
            integrate_adaptive(&mut f, 1e-6, 1.0, opts),
            Err(Error::QuadratureNoConvergence { .. })
        ));
    }

    #[test]
    fn dense_fallback_matches() {
        let mut f = |x: f64| (-x * x).exp();
        let res = integrate_dense(&mut f, 0.0, 3.0, 1e-12).unwrap();
        let adaptive = integrate_adaptive(&mut f, 0.0, 3.0, QuadOptions::default()).unwrap();
        assert!((res.value - adaptive.value).abs() < 1e-12);
    }
}
