//! Thermodynamic-limit integrals and the asymptotic decay law of the
//! longitudinal magnetization for quenches inside the ordered phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{dispersion, pair_amplitudes, sinc_factor, validate_field};
use crate::quadrature::{integrate, QuadOptions};

const LIMIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitObservable {
    /// `<sigma^z_1>`
    Sz,
    /// `<sigma^x_1 sigma^x_2>`
    Cxx,
    /// `rho^{(12)}_{11}`
    Rho11,
}

/// Number of GK panels for an integrand oscillating like `cos(2 L_k t)` on `[0, pi]`.
fn oscillation_pieces(g: f64, t: f64) -> usize {
    let max_lambda = 2.0 * (1.0 + g);
    (4.0 + 2.0 * max_lambda * t / PI).ceil().min(4096.0) as usize
}

/// `sin^2 k (1 - cos 2 L t) / L^2`, written as `2 sin^2 k (sin(L t)/L)^2`
/// so it stays finite where the gap closes.
fn quench_weight(g: f64, k: f64, t: f64) -> f64 {
    let s = sinc_factor(dispersion(g, k), t);
    2.0 * k.sin().powi(2) * s * s
}

fn quench_integral(g: f64, t: f64) -> Result<f64> {
    let opts = QuadOptions::default()
        .with_abs_tol(LIMIT_TOL)
        .with_pieces(oscillation_pieces(g, t));
    Ok(integrate(|k| quench_weight(g, k, t), 0.0, PI, opts)?.value)
}

/// `N -> infinity` value of `which` at time `t` after the quench to `g`.
pub fn thermodynamic_limit(g: f64, t: f64, which: LimitObservable) -> Result<f64> {
    validate_field(g)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidTimeGrid(format!("negative time {t}")));
    }
    match which {
        // (4g/pi) int_0^pi sin^2 k (1 - cos 2 L t) / L^2 dk
        LimitObservable::Sz => Ok(4.0 * g / PI * quench_integral(g, t)?),
        LimitObservable::Cxx => Ok(1.0 - 4.0 * g * g / PI * quench_integral(g, t)?),
        LimitObservable::Rho11 => rho11_limit(g, t),
    }
}

/// `(2/pi^2) int_0^pi dk int_0^k dk' [(1 - cos k cos k') |v_k|^2 |v_k'|^2
///   + sin k sin k' Re(u_k^* v_k u_k' v_k'^*)]`.
///
/// The inner integral only depends on `k` through its upper limit, so the
/// inner integrand is split into three `k`-independent pieces.
fn rho11_limit(g: f64, t: f64) -> Result<f64> {
    let pieces = oscillation_pieces(g, t);
    let inner_opts = QuadOptions::default().with_abs_tol(1e-11).with_pieces((pieces / 4).max(1));
    let outer_opts = QuadOptions::default().with_abs_tol(LIMIT_TOL).with_pieces(pieces);

    let inner = |upper: f64| -> Result<(f64, f64, Complex64)> {
        if upper == 0.0 {
            return Ok((0.0, 0.0, Complex64::new(0.0, 0.0)));
        }
        let occ = integrate(|k| pair_amplitudes(g, k, t).1.norm_sqr(), 0.0, upper, inner_opts)?.value;
        let occ_cos = integrate(|k| k.cos() * pair_amplitudes(g, k, t).1.norm_sqr(), 0.0, upper, inner_opts)?.value;
        let anomalous = |part: fn(Complex64) -> f64| {
            integrate(
                |k| {
                    let (u, v) = pair_amplitudes(g, k, t);
                    part(k.sin() * u * v.conj())
                },
                0.0,
                upper,
                inner_opts,
            )
        };
        let re = anomalous(|z| z.re)?.value;
        let im = anomalous(|z| z.im)?.value;
        Ok((occ, occ_cos, Complex64::new(re, im)))
    };

    let mut failure = None;
    let outer = integrate(
        |k| match inner(k) {
            Ok((occ, occ_cos, anomalous)) => {
                let (u, v) = pair_amplitudes(g, k, t);
                v.norm_sqr() * (occ - k.cos() * occ_cos) + k.sin() * (u.conj() * v * anomalous).re
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        PI,
        outer_opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 / (PI * PI) * outer.value)
}

/// `A(g) e^{-gamma(g) t}` asymptote of `<sigma^x>` for `N -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayLaw {
    /// Only defined for `g < 1`.
    pub prefactor: Option<f64>,
    pub rate: f64,
}

/// `A(g) = sqrt((1 + sqrt(1 - g^2)) / 2)` and
/// `gamma(g) = (4g/pi) int_0^pi (sin k / L_k) ln(L_k / (2 (1 + g cos k))) dk`.
pub fn asymptotic_decay_law(g: f64) -> Result<DecayLaw> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::DecayLawDomain(g));
    }
    let prefactor = (g < 1.0).then(|| ((1.0 + (1.0 - g * g).sqrt()) / 2.0).sqrt());
    Ok(DecayLaw {
        prefactor,
        rate: decay_rate(g)?,
    })
}

/// `(sin k / L_k) ln(L_k / (2 (1 + g cos k)))`, with `1 + g cos k` written as
/// `(1-g) + 2g cos^2(k/2)` to stay accurate near `k = pi`.
fn decay_integrand(g: f64, k: f64) -> f64 {
    let lambda = dispersion(g, k);
    let half = (k / 2.0).cos();
    let denom = 2.0 * ((1.0 - g) + 2.0 * g * half * half);
    if lambda == 0.0 || denom <= 0.0 {
        return 0.0;
    }
    k.sin() / lambda * (lambda / denom).ln()
}

fn decay_rate(g: f64) -> Result<f64> {
    if g == 0.0 {
        return Ok(0.0);
    }
    // At g = 1 the integrand reduces to (sin(k/2)/2) ln(1/cos(k/2)): a
    // logarithmic endpoint singularity that GK handles by bisection.
    let integrand = |k: f64| decay_integrand(g, k);
    let opts = QuadOptions::default().with_abs_tol(1e-11).with_pieces(8);
    Ok(4.0 * g / PI * integrate(integrand, 0.0, PI, opts)?.value)
}
