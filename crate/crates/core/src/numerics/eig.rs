//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Matrices here are at most a few dozen rows (Hamiltonians and Choi matrices
//! of small systems), where Jacobi is both simple and accurate to a few ulps.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance (max-entry norm of `H − H†`) accepted by [`herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Relative magnitude window inside which two eigenvector entries count as tied
/// for phase fixing.
const PHASE_TIE_REL: f64 = 1e-10;

/// Eigenvalues in ascending order with the matching unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let vl = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        &vl * &v.adjoint()
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Output is canonical: eigenvalues ascending, and each eigenvector's
/// largest-magnitude entry (lowest row index on ties) is real and positive.
pub fn herm_eig(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let n = h.check_square("herm_eig")?;
    if let Some((i, j)) = h.hermiticity_violation(HERMITIAN_TOL) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian at entry ({i}, {j}): {} vs conj({})",
            h[(i, j)],
            h[(j, i)]
        )));
    }

    let mut a = (h + &h.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut vk = v.column(k);
        fix_phase(&mut vk);
        for (row, z) in vk.into_iter().enumerate() {
            eigenvectors[(row, col)] = z;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`: `A ← J† A J`, `V ← V J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - PHASE_TIE_REL))
        .expect("max is attained");
    let rot = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}
