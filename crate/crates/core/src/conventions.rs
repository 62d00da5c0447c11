//! Phase and sign conventions shared by the momentum-space and spin-space
//! code paths. Everything that can silently flip a sign lives here.
//!
//! * Jordan-Wigner: `sigma^-_j = T_j c_j`, `T_j = prod_{l<j} (-sigma^z_l)`,
//!   `sigma^z_j = 2 c^dag_j c_j - 1`. Spin up is an occupied fermion.
//! * Fourier: `c_{k} = e^{-i pi/4} N^{-1/2} sum_j e^{-ikj} c_j`, sites `j = 1..N`.
//! * Initial state: `|R> = (|G+> + e^{-i pi/4} |G->) / sqrt(2)`.
//! * Spin basis (oracle): site 1 is the most significant bit; bit 0 is up.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

/// Phase carried by `c^dag_k` in the real-space expansion.
pub fn fourier_phase() -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4)
}

/// Weight of the odd-parity component of the initial state.
pub fn odd_component_phase() -> Complex64 {
    Complex64::from_polar(1.0, -FRAC_PI_4)
}

/// Energy of the unpaired odd-sector modes (k=0 filled, k=-pi empty) is -2,
/// so that component picks up `e^{+2it}`.
pub fn odd_sector_phase(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * t)
}

/// `<c_j> = (-1)^{j-1} <X-string ... sigma^-_j>`; the sign relating the
/// fermion amplitude at site `j` (1-based) to the spin string.
pub fn string_sign(site: usize) -> f64 {
    if site % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}
