//! Kronecker products, Kronecker sums and the vectorization maps.
//!
//! `vec` stacks columns: `vec(M)[j*d + i] = M[i][j]`. With this convention
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`, which is the layout every superoperator in
//! the crate uses. `rvec` stacks rows and is only used for Choi-matrix
//! eigenvectors.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Standard Kronecker product; block `(a, b)` of the result is `A[a][b] * B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker sum `A ⊗ 𝟙 + 𝟙 ⊗ B` of two square matrices.
pub fn kron_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let na = a.check_square("kron_sum lhs")?;
    let nb = b.check_square("kron_sum rhs")?;
    let mut out = kron(a, &ComplexMatrix::identity(nb));
    out += &kron(&ComplexMatrix::identity(na), b);
    Ok(out)
}

/// Column-stacking vectorization of a square matrix.
pub fn vec(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let d = m.check_square("vec")?;
    Ok((0..d * d).map(|k| m[(k % d, k / d)]).collect())
}

/// Inverse of [`vec`].
pub fn unvec(v: &[Complex64]) -> Result<ComplexMatrix> {
    let d = perfect_sqrt(v.len())?;
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[j * d + i]))
}

/// Row-stacking vectorization: `rvec(M)[i*d + j] = M[i][j]`.
pub fn rvec(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    m.check_square("rvec")?;
    Ok(m.as_slice().to_vec())
}

/// Inverse of [`rvec`].
pub fn unrvec(v: &[Complex64]) -> Result<ComplexMatrix> {
    let d = perfect_sqrt(v.len())?;
    ComplexMatrix::new(d, d, v.to_vec())
}

/// Frobenius distance `‖A − B‖_F`.
pub fn l2_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_same_shape(b, "l2_distance")?;
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

pub(crate) fn perfect_sqrt(n: usize) -> Result<usize> {
    let d = (n as f64).sqrt().round() as usize;
    if d == 0 || d * d != n {
        return Err(Error::dim(format!(
            "length {n} is not a nonzero perfect square"
        )));
    }
    Ok(d)
}
