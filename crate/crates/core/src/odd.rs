//! Parity-breaking expectation values: `<c_j>_t` and everything built on it.
//!
//! `<c_j> = (e^{-i pi/4} <phi_+|c_j|phi_-> + e^{i pi/4} <phi_-|c_j|phi_+>) / 2`.
//! Each sector state is a product of linear operators on the real-space
//! vacuum,
//!
//! ```text
//! |phi_+> = prod_{k in K'_+} (u_k c_k - v_k c^dag_{-k}) c^dag_k |vac>
//! |phi_-> = e^{2it} c^dag_0 prod_{k in K'_-} (u_k c_k - v_k c^dag_{-k}) c^dag_k |vac>
//! ```
//!
//! so each cross-parity matrix element is a vacuum expectation of `2N` linear
//! operators, i.e. a `2N x 2N` Pfaffian. The `k = -pi` odd mode is empty and
//! never appears.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conventions::{fourier_phase, odd_component_phase, string_sign};
use crate::error::{Error, Result};
use crate::gaussian::{contraction_matrix, LinearOp};
use crate::model::{ModeAmplitudes, QuenchState};
use crate::pfaffian::SkewMatrix;

/// `<c_j>_t` at one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddAmplitude {
    /// 1-based site index.
    pub site: usize,
    pub time: f64,
    pub value: Complex64,
    /// True when one of the Pfaffians hit the pivot guard (the matrix element
    /// is then reported as exactly zero).
    pub degenerate: bool,
}

/// Anything that can produce `<c_j>_t`. The Pfaffian kernel is the production
/// backend; the exact-diagonalization oracle implements this too.
pub trait OddAmplitudeBackend {
    fn c_expectations(&self, state: &QuenchState, sites: &[usize]) -> Result<Vec<OddAmplitude>>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PfaffianBackend;

impl OddAmplitudeBackend for PfaffianBackend {
    fn c_expectations(&self, state: &QuenchState, sites: &[usize]) -> Result<Vec<OddAmplitude>> {
        let kernel = CrossParityKernel::new(state);
        sites.iter().map(|&j| kernel.amplitude(j)).collect()
    }
}

fn check_site(site: usize, n_sites: usize) -> Result<()> {
    if site == 0 || site > n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

fn mode_annihilator(n: usize, k: f64) -> LinearOp {
    let norm = fourier_phase().conj() / (n as f64).sqrt();
    LinearOp::annihilator((1..=n).map(|j| norm * Complex64::from_polar(1.0, -k * j as f64)).collect())
}

fn mode_creator(n: usize, k: f64) -> LinearOp {
    let norm = fourier_phase() / (n as f64).sqrt();
    LinearOp::creator((1..=n).map(|j| norm * Complex64::from_polar(1.0, k * j as f64)).collect())
}

/// Ket and bra operator strings for one sector's paired modes.
fn sector_operators(n: usize, amps: &ModeAmplitudes) -> (Vec<LinearOp>, Vec<LinearOp>) {
    let mut ket = Vec::with_capacity(2 * amps.len());
    let mut bra = Vec::with_capacity(2 * amps.len());
    for (k, u, v) in amps.iter() {
        let ck = mode_annihilator(n, k);
        let cmk = mode_annihilator(n, -k);
        let dk = mode_creator(n, k);
        let dmk = mode_creator(n, -k);
        // (u c_k - v c^dag_{-k}) c^dag_k |vac>
        ket.push(LinearOp::combine(u, &ck, -v, &dmk));
        ket.push(dk.clone());
        // <vac| c_k (u* c^dag_k - v* c_{-k})
        bra.push(ck);
        bra.push(LinearOp::combine(u.conj(), &dk, -v.conj(), &cmk));
    }
    (ket, bra)
}

/// Contraction matrices of both cross-parity products for one state, with a
/// placeholder slot for `c_j`. Only that slot's row depends on `j`.
pub struct CrossParityKernel {
    n_sites: usize,
    time: f64,
    odd_phase: Complex64,
    /// `<phi_+| c_j c^dag_0 |odd pairs>`.
    plus_minus: Product,
    /// `<odd pairs| c_0 c_j |phi_+>`.
    minus_plus: Product,
}

struct Product {
    matrix: SkewMatrix,
    slot: usize,
    /// `right_creation[m][site]`: coefficient of `c^dag_site` in the m-th
    /// operator to the right of the slot.
    right_creation: Vec<Vec<Complex64>>,
}

impl Product {
    fn build(left: &[LinearOp], right: &[LinearOp], n: usize) -> Self {
        let placeholder = LinearOp::annihilator(vec![Complex64::new(0.0, 0.0); n]);
        let mut ops: Vec<&LinearOp> = left.iter().collect();
        let slot = ops.len();
        ops.push(&placeholder);
        ops.extend(right.iter());
        Self {
            matrix: contraction_matrix(&ops),
            slot,
            right_creation: right
                .iter()
                .map(|op| (0..n).map(|site| op.creation_coeff(site)).collect())
                .collect(),
        }
    }

    /// Pfaffian with `c_site` in the slot (0-based site).
    fn evaluate(&self, site: usize) -> (Complex64, bool) {
        // operators left of c_j would contract with its creation part, which
        // is absent, so only the row to the right of the slot is filled
        let mut m = self.matrix.clone();
        for (offset, coeffs) in self.right_creation.iter().enumerate() {
            m.set(self.slot, self.slot + 1 + offset, coeffs[site]);
        }
        let pf = m.into_pfaffian();
        (pf.value, pf.degenerate)
    }
}

impl CrossParityKernel {
    pub fn new(state: &QuenchState) -> Self {
        let n = state.n_sites;
        let (ket_even, bra_even) = sector_operators(n, &state.even);
        let (ket_odd, bra_odd) = sector_operators(n, &state.odd);

        let mut right_pm = vec![mode_creator(n, 0.0)];
        right_pm.extend(ket_odd);
        let plus_minus = Product::build(&bra_even, &right_pm, n);

        let mut left_mp = bra_odd;
        left_mp.push(mode_annihilator(n, 0.0));
        let minus_plus = Product::build(&left_mp, &ket_even, n);

        Self {
            n_sites: n,
            time: state.time,
            odd_phase: state.odd.odd_sector_phase,
            plus_minus,
            minus_plus,
        }
    }

    /// `<c_j>_t` for a 1-based site.
    pub fn amplitude(&self, site: usize) -> Result<OddAmplitude> {
        check_site(site, self.n_sites)?;
        let (pm, deg_pm) = self.plus_minus.evaluate(site - 1);
        let (mp, deg_mp) = self.minus_plus.evaluate(site - 1);
        let pm = self.odd_phase * pm;
        let mp = self.odd_phase.conj() * mp;
        let value = 0.5 * (odd_component_phase() * pm + odd_component_phase().conj() * mp);
        Ok(OddAmplitude {
            site,
            time: self.time,
            value,
            degenerate: deg_pm || deg_mp,
        })
    }
}

/// `<c_j>_t` through the Pfaffian kernel.
pub fn cross_parity_amplitude(state: &QuenchState, site: usize) -> Result<OddAmplitude> {
    check_site(site, state.n_sites)?;
    CrossParityKernel::new(state).amplitude(site)
}

/// `(<sigma^x_1>, <sigma^y_1>) = (2 Re <c_1>, -2 Im <c_1>)`.
pub fn longitudinal_magnetization(c1: Complex64) -> (f64, f64) {
    (2.0 * c1.re, -2.0 * c1.im)
}

/// `<X_j> = (-1)^{j-1} (<c_j> + <c_j>^*)` for `X_j = sigma^z_1 ... sigma^z_{j-1} sigma^x_j`.
pub fn string_operator(amp: &OddAmplitude) -> f64 {
    string_sign(amp.site) * 2.0 * amp.value.re
}

/// Triple-operator RDM entries from single ones:
/// `rho12 = (<c_1> - <c_2>) / 2`, `rho24 = (<c_1> + <c_2>) / 2`.
pub fn odd_rdm_entries(c1: Complex64, c2: Complex64) -> (Complex64, Complex64) {
    (0.5 * (c1 - c2), 0.5 * (c1 + c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Quench;

    fn c1_at(n: usize, g: f64, t: f64, j: usize) -> Complex64 {
        cross_parity_amplitude(&Quench::new(n, g).unwrap().state_at(t), j).unwrap().value
    }

    #[test]
    fn initial_state_values() {
        for &n in &[4, 8, 30] {
            for &g in &[0.0, 0.5, 3.0] {
                let st = Quench::new(n, g).unwrap().state_at(0.0);
                let kernel = CrossParityKernel::new(&st);
                let c1 = kernel.amplitude(1).unwrap().value;
                assert!((c1 - Complex64::new(0.5, 0.0)).norm() < 1e-12, "n={n} g={g} c1={c1}");
                for j in 2..=n {
                    let cj = kernel.amplitude(j).unwrap().value;
                    assert!(cj.norm() < 1e-12, "n={n} j={j} cj={cj}");
                }
                let (sx, sy) = longitudinal_magnetization(c1);
                assert!((sx - 1.0).abs() < 1e-12 && sy.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn string_operator_initial() {
        let st = Quench::new(10, 1.0).unwrap().state_at(0.0);
        let kernel = CrossParityKernel::new(&st);
        assert!((string_operator(&kernel.amplitude(1).unwrap()) - 1.0).abs() < 1e-12);
        for j in 2..=10 {
            assert!(string_operator(&kernel.amplitude(j).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_entries_identity() {
        let (c1, c2) = (Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0));
        let (r12, r24) = odd_rdm_entries(c1, c2);
        assert_eq!(r12, Complex64::new(0.25, 0.0));
        assert_eq!(r24, Complex64::new(0.25, 0.0));
        let (c1, c2) = (c1_at(12, 0.7, 2.3, 1), c1_at(12, 0.7, 2.3, 2));
        let (r12, r24) = odd_rdm_entries(c1, c2);
        assert!((r12 + r24 - c1).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_sites() {
        let st = Quench::new(6, 1.0).unwrap().state_at(0.5);
        assert!(matches!(cross_parity_amplitude(&st, 0), Err(Error::SiteOutOfRange { .. })));
        assert!(matches!(cross_parity_amplitude(&st, 7), Err(Error::SiteOutOfRange { .. })));
    }

    #[test]
    fn amplitudes_are_bounded() {
        for &g in &[0.5, 1.0, 1.5] {
            for i in 0..12 {
                let st = Quench::new(20, g).unwrap().state_at(0.9 * i as f64);
                let kernel = CrossParityKernel::new(&st);
                for j in 1..=20 {
                    assert!(kernel.amplitude(j).unwrap().value.norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn backend_trait_matches_kernel() {
        let st = Quench::new(10, 1.3).unwrap().state_at(1.1);
        let via_trait = PfaffianBackend.c_expectations(&st, &[1, 2, 5]).unwrap();
        for amp in via_trait {
            assert_eq!(amp.value, cross_parity_amplitude(&st, amp.site).unwrap().value);
        }
    }
}
