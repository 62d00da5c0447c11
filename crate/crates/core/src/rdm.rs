//! Single- and two-site reduced density matrices, purity, nearest-neighbour
//! correlators and Wootters concurrence.
//!
//! Two-site basis order: `{up up, up down, down up, down down}`, first label is
//! site 1. Entries follow `rho_ab = <a| rho |b>`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::even::EvenObservables;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are round-off and get clamped.
const POSITIVITY_TOL: f64 = 1e-9;
const PARTIAL_TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of `rho` at or below this are round-off and treated as zero
/// when forming `sqrt(rho)`.
const ROUND_OFF_EIGENVALUE: f64 = 64.0 * f64::EPSILON;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleSiteRDM {
    /// `(<sigma^x>, <sigma^y>, <sigma^z>)`
    pub bloch: [f64; 3],
}

impl SingleSiteRDM {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self { bloch: [sx, sy, sz] }
    }

    /// Reads the Bloch vector off a 2x2 density matrix.
    pub fn from_matrix(m: &Matrix2<Complex64>) -> Self {
        let off = m[(0, 1)];
        Self::new(2.0 * off.re, -2.0 * off.im, (m[(0, 0)] - m[(1, 1)]).re)
    }

    pub fn bloch_length(&self) -> f64 {
        self.bloch.iter().map(|b| b * b).sum::<f64>().sqrt()
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        let [x, y, z] = self.bloch;
        Matrix2::new(
            c(0.5 * (1.0 + z)),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            c(0.5 * (1.0 - z)),
        )
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }
}

/// `P = (1 + |bloch|^2) / 2`.
pub fn purity(r: &SingleSiteRDM) -> f64 {
    0.5 * (1.0 + r.bloch.iter().map(|b| b * b).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteRDM {
    m: Matrix4<Complex64>,
}

impl TwoSiteRDM {
    /// Validates Hermiticity, unit trace and positivity; eigenvalues within
    /// round-off of zero are clamped and the matrix renormalized.
    pub fn from_matrix(m: Matrix4<Complex64>) -> Result<Self> {
        let asym = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::DensityMatrix(format!("not Hermitian (max |rho - rho^dag| = {asym:e})")));
        }
        let m = (m + m.adjoint()) * c(0.5);
        let trace = m.trace();
        if (trace - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::DensityMatrix(format!("trace {trace} != 1")));
        }
        let eig = m.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::DensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        if min < 0.0 {
            let clamped = eig.eigenvalues.map(|l| l.max(0.0));
            let total: f64 = clamped.iter().sum();
            let d = Matrix4::from_diagonal(&clamped.map(|l| c(l / total)));
            let repaired = eig.eigenvectors * d * eig.eigenvectors.adjoint();
            return Ok(Self { m: repaired });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// RDM of site 1 (site 2 traced out).
    pub fn trace_out_second(&self) -> Matrix2<Complex64> {
        Matrix2::from_fn(|a, b| self.m[(2 * a, 2 * b)] + self.m[(2 * a + 1, 2 * b + 1)])
    }

    /// RDM of site 2 (site 1 traced out).
    pub fn trace_out_first(&self) -> Matrix2<Complex64> {
        Matrix2::from_fn(|a, b| self.m[(a, b)] + self.m[(a + 2, b + 2)])
    }

    /// `Tr(rho  A (x) B)`.
    pub fn expectation(&self, first: &Matrix2<Complex64>, second: &Matrix2<Complex64>) -> Complex64 {
        (self.m * first.kronecker(second)).trace()
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = self.m.symmetric_eigen().eigenvalues;
        [e[0], e[1], e[2], e[3]]
    }
}

/// Builds the nearest-neighbour RDM from the even entries and the two
/// triple-operator entries `rho12`, `rho24`, and checks that both partial
/// traces reproduce `single`.
pub fn assemble_two_site(
    even: &EvenObservables,
    rho12: Complex64,
    rho24: Complex64,
    single: &SingleSiteRDM,
) -> Result<TwoSiteRDM> {
    let r11 = c(even.rho11);
    let r22 = c(even.rho22);
    let r23 = c(even.rho23);
    let r14 = even.rho14;
    let r44 = c(1.0 - even.rho11 - 2.0 * even.rho22);
    #[rustfmt::skip]
    let m = Matrix4::new(
        r11,           rho12,         rho12,         r14,
        rho12.conj(),  r22,           r23,           rho24,
        rho12.conj(),  r23,           r22,           rho24,
        r14.conj(),    rho24.conj(),  rho24.conj(),  r44,
    );
    let rdm = TwoSiteRDM::from_matrix(m)?;
    let expected = single.matrix();
    for reduced in [rdm.trace_out_second(), rdm.trace_out_first()] {
        let dev = (reduced - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > PARTIAL_TRACE_TOL {
            return Err(Error::DensityMatrix(format!("partial trace off by {dev:e}")));
        }
    }
    Ok(rdm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub czz: f64,
    pub cxx: f64,
    pub cxy: f64,
    pub cxz: f64,
}

/// Nearest-neighbour correlators; `cxz = <X_2> = -2 Re <c_2>`.
pub fn correlators(r: &TwoSiteRDM, c2: Complex64) -> Correlators {
    let sz = SingleSiteRDM::from_matrix(&r.trace_out_second()).bloch[2];
    let rho11 = r.entry(0, 0).re;
    let rho14 = r.entry(0, 3);
    let rho23 = r.entry(1, 2).re;
    Correlators {
        czz: 4.0 * rho11 - 2.0 * sz - 1.0,
        cxx: 2.0 * (rho14.re + rho23),
        cxy: -2.0 * rho14.im,
        cxz: -2.0 * c2.re,
    }
}

fn sigma_y_pair() -> Matrix4<Complex64> {
    let sy = Matrix2::new(c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0));
    sy.kronecker(&sy)
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)` where `l_i^2` are the
/// eigenvalues of `R = sqrt(rho) rho~ sqrt(rho)`, `rho~ = (Y x Y) rho^* (Y x Y)`.
///
/// The `l_i` are taken as singular values of `sqrt(rho) sqrt(rho~)` (whose
/// Gram matrix is `R`): square roots of eigenvalues of `R` would turn
/// round-off of order `eps` into errors of order `sqrt(eps)` near product
/// states.
pub fn concurrence(r: &TwoSiteRDM) -> Result<f64> {
    let eig = r.m.symmetric_eigen();
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -POSITIVITY_TOL) {
        return Err(Error::DensityMatrix(format!("negative eigenvalue {bad:e}")));
    }
    let roots = eig.eigenvalues.map(|l| c(if l > ROUND_OFF_EIGENVALUE { l.sqrt() } else { 0.0 }));
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    let yy = sigma_y_pair();
    let sqrt_flipped = yy * sqrt_rho.conjugate() * yy;
    let mut l: Vec<f64> = (sqrt_rho * sqrt_flipped).singular_values().iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product_state(a: [Complex64; 2], b: [Complex64; 2]) -> TwoSiteRDM {
        let psi = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        TwoSiteRDM::from_matrix(Matrix4::from_fn(|i, j| psi[i] * psi[j].conj())).unwrap()
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(s), c(0.0), c(0.0), c(s)];
        let r = TwoSiteRDM::from_matrix(Matrix4::from_fn(|i, j| psi[i] * psi[j].conj())).unwrap();
        assert!((concurrence(&r).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_concurrence() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = product_state([c(s), c(s)], [c(0.6), Complex64::new(0.0, 0.8)]);
        assert!(concurrence(&r).unwrap() < 1e-12);
    }

    #[test]
    fn initial_rdm_is_uniform() {
        let even = EvenObservables {
            sz: 0.0,
            rho14: c(0.25),
            rho23: 0.25,
            rho11: 0.25,
            rho22: 0.25,
        };
        let single = SingleSiteRDM::new(1.0, 0.0, 0.0);
        let r = assemble_two_site(&even, c(0.25), c(0.25), &single).unwrap();
        assert!(assemble_two_site(&even, c(0.25), c(0.2), &single).is_err());
        for i in 0..4 {
            for j in 0..4 {
                assert!((r.entry(i, j) - c(0.25)).norm() < 1e-15);
            }
        }
        let corr = correlators(&r, c(0.0));
        assert!(corr.czz.abs() < 1e-15);
        assert!((corr.cxx - 1.0).abs() < 1e-15);
        assert!(corr.cxy.abs() < 1e-15);
        assert_eq!(corr.cxz, 0.0);
    }

    #[test]
    fn purity_examples() {
        assert_eq!(SingleSiteRDM::new(1.0, 0.0, 0.0).purity(), 1.0);
        assert_eq!(SingleSiteRDM::new(0.0, 0.0, 0.0).purity(), 0.5);
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        let mut m = Matrix4::identity() * c(0.25);
        m[(0, 1)] = c(0.1);
        assert!(TwoSiteRDM::from_matrix(m).is_err());
        assert!(TwoSiteRDM::from_matrix(Matrix4::identity() * c(0.3)).is_err());
        let neg = Matrix4::from_diagonal(&nalgebra::Vector4::new(c(0.6), c(0.3), c(0.2), c(-0.1)));
        assert!(TwoSiteRDM::from_matrix(neg).is_err());
    }

    #[test]
    fn tiny_negative_eigenvalue_is_repaired() {
        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(c(0.5 + 5e-10), c(0.3), c(0.2), c(-5e-10)));
        let r = TwoSiteRDM::from_matrix(m).unwrap();
        assert!(r.eigenvalues().iter().all(|&l| l >= -1e-15));
        assert!((r.matrix().trace() - c(1.0)).norm() < 1e-14);
    }

    fn random_unitary2(a: f64, b: f64, cc: f64, d: f64) -> Matrix2<Complex64> {
        // exp(i d) [[e^{ia} cos b, e^{ic} sin b], [-e^{-ic} sin b, e^{-ia} cos b]]
        let ph = Complex64::from_polar(1.0, d);
        Matrix2::new(
            ph * Complex64::from_polar(b.cos(), a),
            ph * Complex64::from_polar(b.sin(), cc),
            -ph * Complex64::from_polar(b.sin(), -cc),
            ph * Complex64::from_polar(b.cos(), -a),
        )
    }

    proptest! {
        #[test]
        fn concurrence_is_local_unitary_invariant(
            w in proptest::collection::vec(0.0f64..1.0, 4),
            phases in proptest::collection::vec(-3.0f64..3.0, 16),
        ) {
            // random mixed state: sum of weighted projectors on random vectors
            let total: f64 = w.iter().sum();
            prop_assume!(total > 1e-3);
            let mut m = Matrix4::zeros();
            for (i, wi) in w.iter().enumerate() {
                let v = nalgebra::Vector4::from_fn(|r, _| Complex64::from_polar(1.0 + r as f64 * 0.1 * (i as f64 + 1.0), phases[4 * i + r]));
                let v = v.normalize();
                m += v * v.adjoint() * c(wi / total);
            }
            let r = TwoSiteRDM::from_matrix(m).unwrap();
            let u = random_unitary2(phases[0], phases[1], phases[2], phases[3]).kronecker(
                &random_unitary2(phases[4], phases[5], phases[6], phases[7]));
            let rotated = TwoSiteRDM::from_matrix(u * m * u.adjoint()).unwrap();
            let (c0, c1) = (concurrence(&r).unwrap(), concurrence(&rotated).unwrap());
            prop_assert!((c0 - c1).abs() < 1e-9, "{} vs {}", c0, c1);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&c0));
        }

        #[test]
        fn correlator_formulas_match_traces(
            sx in -0.3f64..0.3, rho11 in 0.1f64..0.3, rho23 in -0.05f64..0.1,
            re14 in -0.1f64..0.1, im14 in -0.1f64..0.1, sz in -0.2f64..0.2,
        ) {
            let even = EvenObservables { sz, rho14: Complex64::new(re14, im14), rho23, rho11, rho22: 0.5 + 0.5 * sz - rho11 };
            let m = {
                let r11 = c(rho11); let r22 = c(even.rho22); let r23 = c(rho23); let r14 = even.rho14;
                let r12 = c(0.25 * sx); let r24 = c(0.25 * sx);
                Matrix4::new(r11, r12, r12, r14, r12.conj(), r22, r23, r24, r12.conj(), r23, r22, r24,
                    r14.conj(), r24.conj(), r24.conj(), c(1.0 - rho11 - 2.0 * even.rho22))
            };
            // skip draws that are not density matrices
            let Ok(r) = TwoSiteRDM::from_matrix(m) else { return Ok(()); };
            let x = Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0));
            let y = Matrix2::new(c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0));
            let z = Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0));
            let corr = correlators(&r, c(0.0));
            prop_assert!((corr.cxx - r.expectation(&x, &x).re).abs() < 1e-12);
            prop_assert!((corr.cxy - r.expectation(&x, &y).re).abs() < 1e-12);
            prop_assert!((corr.czz - r.expectation(&z, &z).re).abs() < 1e-12);
        }
    }
}
