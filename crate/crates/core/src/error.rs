use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring size must be even and at least 4, got {0}")]
    InvalidRingSize(usize),
    #[error("transverse field must be finite and non-negative, got {0}")]
    InvalidField(f64),
    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),
    #[error("site {site} out of range for a ring of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("exact diagonalization limited to {max} sites, got {n_sites}")]
    OracleTooLarge { n_sites: usize, max: usize },
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} > tolerance {tolerance:e}")]
    QuadratureNoConvergence {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },
    #[error("decay law requires 0 <= g <= 1, got {0}")]
    DecayLawDomain(f64),
    #[error("density matrix invariant violated: {0}")]
    DensityMatrix(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("malformed operator: {0}")]
    MalformedOperator(String),
}
