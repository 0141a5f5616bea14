//! Dense complex linear algebra.

pub mod eig;
pub mod expm;
pub mod kron;
pub mod matrix;
pub mod random;

pub use eig::{herm_eig, SpectralDecomposition};
pub use expm::expm;
pub use kron::{kron, kron_sum, l2_distance, rvec, unrvec, unvec, vec};
pub use matrix::{ComplexMatrix, I, ONE, ZERO};

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    let gram = &m.adjoint() * m;
    let sd = herm_eig(&gram).expect("A†A is Hermitian");
    sd.eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
        .sqrt()
}
