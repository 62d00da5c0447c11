//! Vacuum expectation values of products of linear fermion operators.
//!
//! Every operator here is `o = sum_j (a_j c_j + b_j c^dag_j)` over the real-space
//! modes. For a product `o_1 o_2 ... o_2n` Wick's theorem gives
//! `<vac| o_1 ... o_2n |vac> = Pf(M)` with `M_ab = <vac| o_a o_b |vac> = a^(a) . b^(b)`
//! for `a < b`.

use num_complex::Complex64;

use crate::pfaffian::{Pfaffian, SkewMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    annihilation: Option<Vec<Complex64>>,
    creation: Option<Vec<Complex64>>,
}

impl LinearOp {
    pub fn new(annihilation: Option<Vec<Complex64>>, creation: Option<Vec<Complex64>>) -> Self {
        Self {
            annihilation,
            creation,
        }
    }

    pub fn annihilator(coeffs: Vec<Complex64>) -> Self {
        Self::new(Some(coeffs), None)
    }

    pub fn creator(coeffs: Vec<Complex64>) -> Self {
        Self::new(None, Some(coeffs))
    }

    /// `alpha * self + beta * other`.
    pub fn combine(alpha: Complex64, a: &LinearOp, beta: Complex64, b: &LinearOp) -> Self {
        fn mix(
            alpha: Complex64,
            x: &Option<Vec<Complex64>>,
            beta: Complex64,
            y: &Option<Vec<Complex64>>,
        ) -> Option<Vec<Complex64>> {
            match (x, y) {
                (None, None) => None,
                (Some(x), None) => Some(x.iter().map(|v| alpha * v).collect()),
                (None, Some(y)) => Some(y.iter().map(|v| beta * v).collect()),
                (Some(x), Some(y)) => Some(x.iter().zip(y).map(|(p, q)| alpha * p + beta * q).collect()),
            }
        }
        Self {
            annihilation: mix(alpha, &a.annihilation, beta, &b.annihilation),
            creation: mix(alpha, &a.creation, beta, &b.creation),
        }
    }

    /// Coefficient of `c^dag_site` (0-based).
    pub fn creation_coeff(&self, site: usize) -> Complex64 {
        self.creation
            .as_ref()
            .map_or(Complex64::new(0.0, 0.0), |c| c[site])
    }

    pub fn has_creation(&self) -> bool {
        self.creation.is_some()
    }

    /// `<vac| self later |vac>`.
    pub fn contraction(&self, later: &LinearOp) -> Complex64 {
        match (&self.annihilation, &later.creation) {
            (Some(a), Some(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Wick contraction matrix of an ordered operator product.
pub fn contraction_matrix(ops: &[&LinearOp]) -> SkewMatrix {
    SkewMatrix::from_upper(ops.len(), |a, b| ops[a].contraction(ops[b]))
}

/// `<vac| ops[0] ops[1] ... |vac>`.
pub fn vacuum_expectation(ops: &[&LinearOp]) -> Pfaffian {
    contraction_matrix(ops).into_pfaffian()
}
