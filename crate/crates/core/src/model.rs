//! Quench configuration, momentum grids of the two parity sectors and the
//! closed-form evolution of each `(k, -k)` pair.
//!
//! After the quench `g: 0 -> g` every pair evolves independently as
//!
//! ```text
//! |chi_k(t)> = [u_k(t) + v_k(t) c^dag_k c^dag_{-k}] |vac>
//! u_k(t) = sin(k/2) [cos(L t) + 2i (1-g) sin(L t)/L]
//! v_k(t) = cos(k/2) [cos(L t) + 2i (1+g) sin(L t)/L]
//! ```
//!
//! with `L = dispersion(g, k)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conventions;
use crate::error::{Error, Result};

/// Below this the `sin(L t)/L` factor is replaced by its Taylor expansion.
const DISPERSION_TAYLOR_THRESHOLD: f64 = 1e-8;

pub fn validate_ring_size(n_sites: usize) -> Result<()> {
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(Error::InvalidRingSize(n_sites));
    }
    Ok(())
}

pub fn validate_field(g: f64) -> Result<()> {
    if !g.is_finite() || g < 0.0 {
        return Err(Error::InvalidField(g));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuenchConfig {
    pub n_sites: usize,
    pub field_g: f64,
    pub time_grid: Vec<f64>,
}

impl QuenchConfig {
    pub fn new(n_sites: usize, field_g: f64, time_grid: Vec<f64>) -> Result<Self> {
        validate_ring_size(n_sites)?;
        validate_field(field_g)?;
        validate_time_grid(&time_grid)?;
        Ok(Self {
            n_sites,
            field_g,
            time_grid,
        })
    }
}

pub fn validate_time_grid(times: &[f64]) -> Result<()> {
    let Some(&first) = times.first() else {
        return Err(Error::InvalidTimeGrid("empty".into()));
    };
    if !(first >= 0.0) {
        return Err(Error::InvalidTimeGrid(format!("first time {first} is negative")));
    }
    if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidTimeGrid(format!(
            "not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Uniform grid `t_min, t_min + dt, ..., <= t_max`. Points are computed as
/// `t_min + i*dt` so repeated runs give bit-identical grids.
pub fn uniform_time_grid(t_min: f64, t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max >= t_min) || !(t_min >= 0.0) {
        return Err(Error::InvalidTimeGrid(format!(
            "need 0 <= t_min <= t_max and dt > 0 (t_min={t_min}, t_max={t_max}, dt={dt})"
        )));
    }
    let steps = ((t_max - t_min) / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| t_min + i as f64 * dt).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// Even fermion parity, antiperiodic fermions, `k = (2m+1) pi / N`.
    Even,
    /// Odd fermion parity, periodic fermions, `k = 2 m pi / N`.
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    pub sector: Sector,
    pub n_sites: usize,
    /// Strictly positive momenta of the sector, ascending.
    pub positive_momenta: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(sector: Sector, n_sites: usize) -> Result<Self> {
        validate_ring_size(n_sites)?;
        let n = n_sites as f64;
        let positive_momenta = match sector {
            Sector::Even => (0..n_sites / 2)
                .map(|m| (2 * m + 1) as f64 * PI / n)
                .collect(),
            Sector::Odd => (1..n_sites / 2).map(|m| 2.0 * m as f64 * PI / n).collect(),
        };
        Ok(Self {
            sector,
            n_sites,
            positive_momenta,
        })
    }

    /// The self-conjugate modes `{-pi, 0}` of the odd sector.
    pub fn unpaired_modes(&self) -> Option<[f64; 2]> {
        match self.sector {
            Sector::Even => None,
            Sector::Odd => Some([-PI, 0.0]),
        }
    }

    pub fn len(&self) -> usize {
        self.positive_momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive_momenta.is_empty()
    }
}

/// Even and odd grids for the ring described by `config`.
pub fn build_grids(config: &QuenchConfig) -> Result<(MomentumGrid, MomentumGrid)> {
    build_grids_for(config.n_sites)
}

pub fn build_grids_for(n_sites: usize) -> Result<(MomentumGrid, MomentumGrid)> {
    Ok((
        MomentumGrid::new(Sector::Even, n_sites)?,
        MomentumGrid::new(Sector::Odd, n_sites)?,
    ))
}

/// Single-particle energy `2 sqrt(g^2 + 2 g cos k + 1)`.
pub fn dispersion(g: f64, k: f64) -> f64 {
    // same radicand as (1-g)^2 + 4g cos^2(k/2), which has no cancellation near k = pi
    let half = (k / 2.0).cos();
    2.0 * ((1.0 - g).powi(2) + 4.0 * g * half * half).sqrt()
}

/// `sin(L t) / L`, continuous through `L = 0`.
pub fn sinc_factor(lambda: f64, t: f64) -> f64 {
    if lambda < DISPERSION_TAYLOR_THRESHOLD {
        t - lambda * lambda * t * t * t / 6.0
    } else {
        (lambda * t).sin() / lambda
    }
}

/// `(u_k(t), v_k(t))` for a single pair.
pub fn pair_amplitudes(g: f64, k: f64, t: f64) -> (Complex64, Complex64) {
    let lambda = dispersion(g, k);
    let c = (lambda * t).cos();
    let s = sinc_factor(lambda, t);
    let u = (k / 2.0).sin() * Complex64::new(c, 2.0 * (1.0 - g) * s);
    let v = (k / 2.0).cos() * Complex64::new(c, 2.0 * (1.0 + g) * s);
    (u, v)
}

/// Pair amplitudes of one sector at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    pub sector: Sector,
    pub time: f64,
    pub momenta: Vec<f64>,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    /// `e^{2it}` for the odd sector, 1 for the even sector.
    pub odd_sector_phase: Complex64,
}

impl ModeAmplitudes {
    pub fn evolve(grid: &MomentumGrid, g: f64, t: f64) -> Self {
        let (u, v) = grid
            .positive_momenta
            .iter()
            .map(|&k| pair_amplitudes(g, k, t))
            .unzip();
        let odd_sector_phase = match grid.sector {
            Sector::Even => Complex64::new(1.0, 0.0),
            Sector::Odd => conventions::odd_sector_phase(t),
        };
        Self {
            sector: grid.sector,
            time: t,
            momenta: grid.positive_momenta.clone(),
            u,
            v,
            odd_sector_phase,
        }
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64, Complex64)> + '_ {
        self.momenta
            .iter()
            .zip(&self.u)
            .zip(&self.v)
            .map(|((&k, &u), &v)| (k, u, v))
    }
}

/// Spec-named entry point: amplitudes of `grid` at time `t` for the quench in `config`.
pub fn evolve_amplitudes(config: &QuenchConfig, grid: &MomentumGrid, t: f64) -> ModeAmplitudes {
    ModeAmplitudes::evolve(grid, config.field_g, t)
}

/// A fixed `(N, g)` quench: owns both grids and hands out evolved states.
#[derive(Debug, Clone)]
pub struct Quench {
    n_sites: usize,
    g: f64,
    even: MomentumGrid,
    odd: MomentumGrid,
}

impl Quench {
    pub fn new(n_sites: usize, g: f64) -> Result<Self> {
        validate_field(g)?;
        let (even, odd) = build_grids_for(n_sites)?;
        Ok(Self {
            n_sites,
            g,
            even,
            odd,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn field(&self) -> f64 {
        self.g
    }

    pub fn grids(&self) -> (&MomentumGrid, &MomentumGrid) {
        (&self.even, &self.odd)
    }

    pub fn state_at(&self, t: f64) -> QuenchState {
        QuenchState {
            n_sites: self.n_sites,
            g: self.g,
            time: t,
            even: ModeAmplitudes::evolve(&self.even, self.g, t),
            odd: ModeAmplitudes::evolve(&self.odd, self.g, t),
        }
    }
}

/// Both sector states at one time; the input of every observable evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchState {
    pub n_sites: usize,
    pub g: f64,
    pub time: f64,
    pub even: ModeAmplitudes,
    pub odd: ModeAmplitudes,
}

impl QuenchState {
    pub fn sectors(&self) -> [&ModeAmplitudes; 2] {
        [&self.even, &self.odd]
    }
}
