//! Seeded random matrices for property checks and the `verify` suite.

use num_complex::Complex64;
use rand::Rng;

use super::matrix::ComplexMatrix;

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// `(A + A†)/2` for a random `A`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let a = random_matrix(rng, d, d);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// Random density matrix `A A† / tr(A A†)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let a = random_matrix(rng, d, d);
    let p = &a * &a.adjoint();
    let t = p.trace().re;
    p.scale_real(1.0 / t)
}
