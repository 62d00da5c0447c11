//! Pfaffians of dense complex skew-symmetric matrices by Parlett-Reid
//! tridiagonalization (`A = L T L^T`) with partial pivoting.

use num_complex::Complex64;

/// Pivots smaller than this are treated as exact zeros.
const PIVOT_GUARD: f64 = 1e-300;

/// Dense skew-symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SkewMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Builds the matrix from its strict upper triangle: `upper(i, j)` is
    /// called once for every `i < j`.
    pub fn from_upper<F: FnMut(usize, usize) -> Complex64>(dim: usize, mut upper: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let a = upper(i, j);
                m.entries[i * dim + j] = a;
                m.entries[j * dim + i] = -a;
            }
        }
        m
    }

    /// `(A - A^T) / 2` of an arbitrary square row-major matrix.
    pub fn antisymmetrized(dim: usize, dense: &[Complex64]) -> Self {
        assert_eq!(dense.len(), dim * dim, "matrix must be {dim}x{dim}");
        Self::from_upper(dim, |i, j| 0.5 * (dense[i * dim + j] - dense[j * dim + i]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Sets `A[i][j] = value` and `A[j][i] = -value`.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(i != j, "diagonal of a skew matrix is fixed at zero");
        self.entries[i * self.dim + j] = value;
        self.entries[j * self.dim + i] = -value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn pfaffian(&self) -> Pfaffian {
        self.clone().into_pfaffian()
    }

    /// Consumes the matrix, using it as the elimination workspace.
    pub fn into_pfaffian(mut self) -> Pfaffian {
        let n = self.dim;
        let one = Complex64::new(1.0, 0.0);
        if n == 0 {
            return Pfaffian::exact(one);
        }
        if n % 2 == 1 {
            return Pfaffian::exact(Complex64::new(0.0, 0.0));
        }
        let a = &mut self.entries;
        let mut value = one;
        let mut tau = vec![Complex64::new(0.0, 0.0); n];
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for k in (0..n - 1).step_by(2) {
            // largest entry in column k below the diagonal
            let (pivot, pivot_abs) = (k + 1..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k + 1, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot != k + 1 {
                for c in k..n {
                    a.swap((k + 1) * n + c, pivot * n + c);
                }
                for r in k..n {
                    a.swap(r * n + k + 1, r * n + pivot);
                }
                value = -value;
            }
            if pivot_abs < PIVOT_GUARD {
                return Pfaffian {
                    value: Complex64::new(0.0, 0.0),
                    degenerate: true,
                };
            }
            let akk1 = a[k * n + k + 1];
            value *= akk1;
            if k + 2 < n {
                for j in k + 2..n {
                    tau[j] = a[k * n + j] / akk1;
                    col[j] = a[j * n + k + 1];
                }
                // A[k+2:, k+2:] += tau col^T - col tau^T
                for i in k + 2..n {
                    let (ti, ci) = (tau[i], col[i]);
                    let row = &mut a[i * n..(i + 1) * n];
                    for j in k + 2..n {
                        row[j] += ti * col[j] - ci * tau[j];
                    }
                }
            }
        }
        Pfaffian::exact(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pfaffian {
    pub value: Complex64,
    /// Set when elimination hit a pivot below the scale guard; `value` is 0.
    pub degenerate: bool,
}

impl Pfaffian {
    fn exact(value: Complex64) -> Self {
        Self {
            value,
            degenerate: false,
        }
    }
}

/// Free-function form of [`SkewMatrix::pfaffian`].
pub fn pfaffian(m: &SkewMatrix) -> Pfaffian {
    m.pfaffian()
}
