//! Parity-preserving expectation values in closed form.
//!
//! The even-operator expectation is the average of the two sector
//! expectations; the `1/2` sector weight is folded into every formula below.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{ModeAmplitudes, QuenchState, Sector};

/// Even-operator entries of the nearest-neighbour RDM plus `<sigma^z>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvenObservables {
    pub sz: f64,
    pub rho14: Complex64,
    pub rho23: f64,
    pub rho11: f64,
    pub rho22: f64,
}

impl EvenObservables {
    pub fn evaluate(state: &QuenchState) -> Self {
        let sz = transverse_magnetization(state);
        let (rho14, rho23) = pair_rdm_entries(state);
        let rho11 = four_fermion_rho11(state);
        Self {
            sz,
            rho14,
            rho23,
            rho11,
            rho22: rho22_from(sz, rho11),
        }
    }
}

/// `<sigma^z_1>_t = (2 sum_sigma sum_k |v_k|^2 + 1) / N - 1`.
pub fn transverse_magnetization(state: &QuenchState) -> f64 {
    let n = state.n_sites as f64;
    let occupation: f64 = state
        .sectors()
        .iter()
        .flat_map(|s| s.v.iter())
        .map(|v| v.norm_sqr())
        .sum();
    (2.0 * occupation + 1.0) / n - 1.0
}

/// `(rho14, rho23)`, the two-fermion off-diagonal entries.
pub fn pair_rdm_entries(state: &QuenchState) -> (Complex64, f64) {
    let n = state.n_sites as f64;
    let mut anomalous = Complex64::new(0.0, 0.0);
    let mut hopping = 0.0;
    for sector in state.sectors() {
        for (k, u, v) in sector.iter() {
            anomalous += k.sin() * u.conj() * v;
            hopping += k.cos() * u.norm_sqr();
        }
    }
    (anomalous / n, -(2.0 * hopping - 1.0) / (2.0 * n))
}

/// `rho11 = <c^dag_1 c_1 c^dag_2 c_2>`: the pair double sums of each sector
/// plus the two `O(1/N)` single sums.
pub fn four_fermion_rho11(state: &QuenchState) -> f64 {
    let n2 = (state.n_sites * state.n_sites) as f64;
    let mut total = 0.0;
    for sector in state.sectors() {
        total += 4.0 / n2 * pair_double_sum(sector);
        let single: Vec<f64> = sector
            .iter()
            .map(|(k, _, v)| {
                let weight = match sector.sector {
                    Sector::Even => k.sin().powi(2),
                    Sector::Odd => (2.0 + k.cos()) * (1.0 - k.cos()),
                };
                weight * v.norm_sqr()
            })
            .collect();
        total += 2.0 / n2 * pairwise_sum(&single);
    }
    total
}

/// `rho22 = <c^dag_1 c_1> - rho11 = 1/2 + <sigma^z>/2 - rho11`.
pub fn rho22_from(sz: f64, rho11: f64) -> f64 {
    0.5 + 0.5 * sz - rho11
}

/// `sum_{k > k'} (1 - cos k cos k') |v_k|^2 |v_k'|^2
///  + sin k sin k' Re[u_k^* v_k u_k' v_k'^*]`, pairwise-summed.
fn pair_double_sum(sector: &ModeAmplitudes) -> f64 {
    let m = sector.len();
    let occ: Vec<f64> = sector.v.iter().map(|v| v.norm_sqr()).collect();
    let cos: Vec<f64> = sector.momenta.iter().map(|k| k.cos()).collect();
    let sin: Vec<f64> = sector.momenta.iter().map(|k| k.sin()).collect();
    let anomalous: Vec<Complex64> = sector.u.iter().zip(&sector.v).map(|(u, v)| u.conj() * v).collect();

    let mut row = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for i in 1..m {
        row.clear();
        row.extend((0..i).map(|j| {
            (1.0 - cos[i] * cos[j]) * occ[i] * occ[j]
                + sin[i] * sin[j] * (anomalous[i] * anomalous[j].conj()).re
        }));
        rows.push(pairwise_sum(&row));
    }
    pairwise_sum(&rows)
}

/// Cascade summation; error grows as `O(log n)` instead of `O(n)`.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}
