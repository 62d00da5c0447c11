//! Brute-force spin-basis reference for small rings (`N <= 12`).
//!
//! Basis index: site 1 is the most significant of the `N` bits, bit value 0
//! is spin up (`sigma^z = +1`). The top two bits of an index are therefore the
//! two-site RDM row in the `{up up, up down, down up, down down}` order.
//!
//! `|R>` and `H` are invariant under translation, so by default the spectrum
//! is computed in the zero-momentum block only (352 states at `N = 12`); the
//! full `2^N` space is available for cross-checks.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{validate_field, validate_ring_size, QuenchState};
use crate::odd::{OddAmplitude, OddAmplitudeBackend};
use crate::rdm::{SingleSiteRDM, TwoSiteRDM};

pub const MAX_ED_SITES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    pub n_sites: usize,
    pub time: f64,
    pub amplitudes: Vec<Complex64>,
}

impl SpinState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteOp {
    X,
    Y,
    Z,
    /// `sigma^+ = |up><down|`
    Raise,
    /// `sigma^- = |down><up|`
    Lower,
}

impl SiteOp {
    /// Action on one spin: `bit -> (amplitude, new bit)`.
    fn apply(self, bit: u32) -> Option<(Complex64, u32)> {
        let one = Complex64::new(1.0, 0.0);
        match (self, bit) {
            (SiteOp::X, b) => Some((one, b ^ 1)),
            (SiteOp::Y, 0) => Some((Complex64::new(0.0, 1.0), 1)),
            (SiteOp::Y, _) => Some((Complex64::new(0.0, -1.0), 0)),
            (SiteOp::Z, 0) => Some((one, 0)),
            (SiteOp::Z, _) => Some((-one, 1)),
            (SiteOp::Raise, 1) => Some((one, 0)),
            (SiteOp::Lower, 0) => Some((one, 1)),
            _ => None,
        }
    }
}

/// `coeff * prod_i op_i(site_i)` with distinct 1-based sites.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    pub coeff: Complex64,
    pub factors: Vec<(usize, SiteOp)>,
}

impl SpinOperator {
    pub fn new(coeff: Complex64, factors: Vec<(usize, SiteOp)>) -> Self {
        Self { coeff, factors }
    }

    pub fn pauli(site: usize, op: SiteOp) -> Self {
        Self::new(Complex64::new(1.0, 0.0), vec![(site, op)])
    }

    pub fn pair(a: (usize, SiteOp), b: (usize, SiteOp)) -> Self {
        Self::new(Complex64::new(1.0, 0.0), vec![a, b])
    }

    /// `sigma^z_1 ... sigma^z_{j-1} sigma^x_j`
    pub fn string_x(j: usize) -> Self {
        let mut factors: Vec<_> = (1..j).map(|l| (l, SiteOp::Z)).collect();
        factors.push((j, SiteOp::X));
        Self::new(Complex64::new(1.0, 0.0), factors)
    }

    /// Jordan-Wigner `c_j = prod_{l<j} (-sigma^z_l) sigma^-_j`.
    pub fn fermion_c(j: usize) -> Self {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let mut factors: Vec<_> = (1..j).map(|l| (l, SiteOp::Z)).collect();
        factors.push((j, SiteOp::Lower));
        Self::new(Complex64::new(sign, 0.0), factors)
    }

    fn validate(&self, n_sites: usize) -> Result<()> {
        let mut seen = vec![false; n_sites + 1];
        for &(site, _) in &self.factors {
            if site == 0 || site > n_sites {
                return Err(Error::MalformedOperator(format!("site {site} outside 1..={n_sites}")));
            }
            if std::mem::replace(&mut seen[site], true) {
                return Err(Error::MalformedOperator(format!("site {site} appears twice")));
            }
        }
        Ok(())
    }

    /// `O|s> = amp |s'>` (or zero).
    fn act(&self, n_sites: usize, s: usize) -> Option<(Complex64, usize)> {
        let mut amp = self.coeff;
        let mut out = s;
        for &(site, op) in &self.factors {
            let shift = n_sites - site;
            let (a, bit) = op.apply(((out >> shift) & 1) as u32)?;
            amp *= a;
            out = (out & !(1 << shift)) | ((bit as usize) << shift);
        }
        Some((amp, out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdBasis {
    /// Zero-momentum block of the translation group.
    Translation,
    /// Full `2^N` space.
    Full,
}

/// Eigendecomposition of `H` for one `(N, g)` plus the overlaps of `|R>`.
#[derive(Debug, Clone)]
pub struct EdSystem {
    n_sites: usize,
    g: f64,
    /// block index of each basis state's orbit representative
    block_of: Vec<u32>,
    /// orbit size of each block state
    orbit_len: Vec<f64>,
    energies: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    /// `<E_n | R>`
    overlaps: Vec<f64>,
}

fn rotate(s: usize, n: usize) -> usize {
    let mask = (1usize << n) - 1;
    ((s << 1) | (s >> (n - 1))) & mask
}

/// `H|s> = diag |s> + sum_j (-1) |s ^ bond_j>`.
fn hamiltonian_row(n: usize, g: f64, s: usize, mut emit: impl FnMut(usize, f64)) {
    let down = s.count_ones() as f64;
    emit(s, -g * (n as f64 - 2.0 * down));
    for j in 0..n {
        let bond = (1usize << j) | (1usize << ((j + 1) % n));
        emit(s ^ bond, -1.0);
    }
}

impl EdSystem {
    pub fn new(n_sites: usize, g: f64) -> Result<Self> {
        Self::with_basis(n_sites, g, EdBasis::Translation)
    }

    pub fn with_basis(n_sites: usize, g: f64, basis: EdBasis) -> Result<Self> {
        validate_ring_size(n_sites)?;
        validate_field(g)?;
        if n_sites > MAX_ED_SITES {
            return Err(Error::OracleTooLarge {
                n_sites,
                max: MAX_ED_SITES,
            });
        }
        let dim = 1usize << n_sites;
        let mut block_of = vec![u32::MAX; dim];
        let mut reps = Vec::new();
        let mut orbit_len = Vec::new();
        for s in 0..dim {
            if block_of[s] != u32::MAX {
                continue;
            }
            let block = reps.len() as u32;
            let mut len = 1;
            block_of[s] = block;
            if basis == EdBasis::Translation {
                let mut r = rotate(s, n_sites);
                while r != s {
                    block_of[r] = block;
                    len += 1;
                    r = rotate(r, n_sites);
                }
            }
            reps.push(s);
            orbit_len.push(len as f64);
        }

        let size = reps.len();
        let mut h = DMatrix::<f64>::zeros(size, size);
        for (col, &r) in reps.iter().enumerate() {
            let scale = orbit_len[col].sqrt();
            hamiltonian_row(n_sites, g, r, |s, amp| {
                let row = block_of[s] as usize;
                h[(row, col)] += amp * scale / orbit_len[row].sqrt();
            });
        }
        let h = 0.5 * (&h + h.transpose());
        let eig = h.symmetric_eigen();

        let norm = (0.5f64).powf(n_sites as f64 / 2.0);
        let initial: Vec<f64> = orbit_len.iter().map(|l| norm * l.sqrt()).collect();
        let overlaps = (0..size)
            .map(|m| eig.eigenvectors.column(m).iter().zip(&initial).map(|(a, b)| a * b).sum())
            .collect();

        Ok(Self {
            n_sites,
            g,
            block_of,
            orbit_len,
            energies: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
            overlaps,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn field(&self) -> f64 {
        self.g
    }

    /// Dimension of the block that was diagonalized.
    pub fn block_dim(&self) -> usize {
        self.energies.len()
    }

    /// `e^{-iHt}|R>` in the full spin basis.
    pub fn evolve(&self, t: f64) -> Result<SpinState> {
        if !(t >= 0.0) {
            return Err(Error::InvalidTimeGrid(format!("negative time {t}")));
        }
        let size = self.block_dim();
        let phased: Vec<Complex64> = self
            .energies
            .iter()
            .zip(&self.overlaps)
            .map(|(&e, &w)| Complex64::from_polar(w, -e * t))
            .collect();
        let mut block = vec![Complex64::new(0.0, 0.0); size];
        for (m, p) in phased.iter().enumerate() {
            for (b, v) in block.iter_mut().zip(self.eigenvectors.column(m).iter()) {
                *b += p * v;
            }
        }
        let amplitudes = self
            .block_of
            .iter()
            .map(|&b| block[b as usize] / self.orbit_len[b as usize].sqrt())
            .collect();
        Ok(SpinState {
            n_sites: self.n_sites,
            time: t,
            amplitudes,
        })
    }

    /// `<psi|H|psi>`.
    pub fn energy(&self, state: &SpinState) -> f64 {
        let psi = &state.amplitudes;
        let mut total = Complex64::new(0.0, 0.0);
        for (s, a) in psi.iter().enumerate() {
            hamiltonian_row(self.n_sites, self.g, s, |r, h| total += psi[r].conj() * h * a);
        }
        total.re
    }
}

/// `e^{-iHt}|R>` for a one-off `(N, g, t)`.
pub fn ed_evolve(n_sites: usize, g: f64, t: f64) -> Result<SpinState> {
    EdSystem::new(n_sites, g)?.evolve(t)
}

/// `<psi|O|psi>`.
pub fn ed_measure(state: &SpinState, op: &SpinOperator) -> Result<Complex64> {
    op.validate(state.n_sites)?;
    let psi = &state.amplitudes;
    let mut total = Complex64::new(0.0, 0.0);
    for (s, a) in psi.iter().enumerate() {
        if let Some((amp, out)) = op.act(state.n_sites, s) {
            total += psi[out].conj() * amp * a;
        }
    }
    Ok(total)
}

/// RDM of sites 1 and 2.
pub fn ed_two_site_rdm(state: &SpinState) -> Result<TwoSiteRDM> {
    let rest = state.n_sites - 2;
    let psi = &state.amplitudes;
    let width = 1usize << rest;
    let m = Matrix4::from_fn(|a, b| {
        (0..width)
            .map(|r| psi[(a << rest) | r] * psi[(b << rest) | r].conj())
            .sum()
    });
    TwoSiteRDM::from_matrix(m)
}

/// Bloch vector of site `site`.
pub fn ed_single_site(state: &SpinState, site: usize) -> Result<SingleSiteRDM> {
    let e = |op| ed_measure(state, &SpinOperator::pauli(site, op)).map(|z| z.re);
    Ok(SingleSiteRDM::new(e(SiteOp::X)?, e(SiteOp::Y)?, e(SiteOp::Z)?))
}

/// Squared norms of the even and odd fermion-parity components of `state`
/// and their overlap.
pub fn ed_parity_split(state: &SpinState) -> (f64, f64, Complex64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut overlap = Complex64::new(0.0, 0.0);
    for (s, a) in state.amplitudes.iter().enumerate() {
        // parity of the up-spin count; equals that of the down count for even N
        let p = if s.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let plus = 0.5 * (1.0 + p) * a;
        let minus = 0.5 * (1.0 - p) * a;
        even += plus.norm_sqr();
        odd += minus.norm_sqr();
        overlap += plus.conj() * minus;
    }
    (even, odd, overlap)
}

impl OddAmplitudeBackend for EdSystem {
    fn c_expectations(&self, state: &QuenchState, sites: &[usize]) -> Result<Vec<OddAmplitude>> {
        if state.n_sites != self.n_sites {
            return Err(Error::InvalidRingSize(state.n_sites));
        }
        if state.g != self.g {
            return Err(Error::InvalidField(state.g));
        }
        let psi = self.evolve(state.time)?;
        sites
            .iter()
            .map(|&site| {
                if site == 0 || site > self.n_sites {
                    return Err(Error::SiteOutOfRange {
                        site,
                        n_sites: self.n_sites,
                    });
                }
                Ok(OddAmplitude {
                    site,
                    time: state.time,
                    value: ed_measure(&psi, &SpinOperator::fermion_c(site))?,
                    degenerate: false,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn measure(state: &SpinState, op: SpinOperator) -> Complex64 {
        ed_measure(state, &op).unwrap()
    }

    #[test]
    fn initial_state_expectations() {
        let psi = ed_evolve(8, 1.3, 0.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!((measure(&psi, SpinOperator::pauli(1, SiteOp::X)).re - 1.0).abs() < 1e-12);
        let zz = SpinOperator::pair((1, SiteOp::Z), (2, SiteOp::Z));
        assert!(measure(&psi, zz).norm() < 1e-12);
        let r = ed_two_site_rdm(&psi).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((r.entry(i, j) - Complex64::new(0.25, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_field_is_stationary() {
        let sys = EdSystem::new(6, 0.0).unwrap();
        let psi0 = sys.evolve(0.0).unwrap();
        let psi = sys.evolve(3.7).unwrap();
        let overlap: Complex64 = psi0.amplitudes.iter().zip(&psi.amplitudes).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_block_matches_full_space() {
        for &n in &[6, 8] {
            let sym = EdSystem::new(n, 0.7).unwrap();
            let full = EdSystem::with_basis(n, 0.7, EdBasis::Full).unwrap();
            assert!(sym.block_dim() < full.block_dim());
            for &t in &[0.0, 0.9, 4.2] {
                let a = sym.evolve(t).unwrap();
                let b = full.evolve(t).unwrap();
                let dev = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                assert!(dev < 1e-11, "n={n} t={t} dev={dev}");
            }
        }
    }

    #[test]
    fn block_dimension_at_twelve_sites() {
        assert_eq!(EdSystem::new(12, 1.0).unwrap().block_dim(), 352);
    }

    #[test]
    fn rejects_large_rings() {
        assert!(matches!(EdSystem::new(14, 1.0), Err(Error::OracleTooLarge { .. })));
        assert!(EdSystem::new(7, 1.0).is_err());
    }

    #[test]
    fn malformed_descriptors() {
        let psi = ed_evolve(4, 1.0, 0.3).unwrap();
        assert!(ed_measure(&psi, &SpinOperator::pauli(5, SiteOp::X)).is_err());
        assert!(ed_measure(&psi, &SpinOperator::pauli(0, SiteOp::X)).is_err());
        let dup = SpinOperator::pair((2, SiteOp::X), (2, SiteOp::Z));
        assert!(matches!(ed_measure(&psi, &dup), Err(Error::MalformedOperator(_))));
    }

    #[test]
    fn translation_symmetry() {
        let sys = EdSystem::with_basis(10, 1.3, EdBasis::Translation).unwrap();
        for &t in &[0.4, 2.0, 7.5] {
            let psi = sys.evolve(t).unwrap();
            let a = measure(&psi, SpinOperator::pauli(1, SiteOp::X));
            let b = measure(&psi, SpinOperator::pauli(5, SiteOp::X));
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fermion_operator_on_initial_state() {
        // <c_1> = <sigma^-_1> = 1/2 on |R>
        let psi = ed_evolve(6, 2.0, 0.0).unwrap();
        assert!((measure(&psi, SpinOperator::fermion_c(1)) - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!(measure(&psi, SpinOperator::fermion_c(3)).norm() < 1e-12);
    }

    #[test]
    fn pauli_algebra() {
        // sigma^x sigma^y = i sigma^z on the same site, checked via sigma^+/- combos
        let psi = ed_evolve(4, 0.8, 1.1).unwrap();
        let x = measure(&psi, SpinOperator::pauli(2, SiteOp::X));
        let y = measure(&psi, SpinOperator::pauli(2, SiteOp::Y));
        let plus = measure(&psi, SpinOperator::pauli(2, SiteOp::Raise));
        let minus = measure(&psi, SpinOperator::pauli(2, SiteOp::Lower));
        assert!((plus + minus - x).norm() < 1e-13);
        assert!((Complex64::new(0.0, -1.0) * (plus - minus) - y).norm() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn conservation_laws(g in 0.0f64..3.0, t in 0.0f64..20.0, half in 2usize..=4) {
            let sys = EdSystem::new(2 * half, g).unwrap();
            let psi = sys.evolve(t).unwrap();
            prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
            let e0 = sys.energy(&sys.evolve(0.0).unwrap());
            prop_assert!((sys.energy(&psi) - e0).abs() < 1e-10);
            let (even, odd, overlap) = ed_parity_split(&psi);
            prop_assert!((even - 0.5).abs() < 1e-10 && (odd - 0.5).abs() < 1e-10);
            prop_assert!(overlap.norm() < 1e-10);
            let r = ed_two_site_rdm(&psi).unwrap();
            prop_assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }
}
