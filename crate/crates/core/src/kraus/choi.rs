//! Choi-matrix route to Kraus operators, used as an independent oracle.
//!
//! Reshuffling convention, with composite indices `(r₁, r₂) ↦ r₁·d + r₂` and
//! `S` in column stacking:
//!
//! ```text
//! J[(i,a),(j,b)] = S[(j,i),(b,a)]
//! ```
//!
//! so that `S = conj(K) ⊗ K` maps to `J = x x†` with `x[(i,a)] = K[i][a]`,
//! the row-stacked `K`.

use crate::error::{Error, Result};
use crate::numerics::{herm_eig, kron, unrvec, ComplexMatrix};
use crate::superop::{Convention, SuperOperator};

pub const DEFAULT_CUTOFF: f64 = 1e-10;

/// Hermiticity tolerance accepted by [`extract_canonical_kraus`].
pub const CHOI_HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub dim: usize,
}

impl ChoiMatrix {
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Smallest eigenvalue; nonnegative (up to rounding) exactly for completely positive maps.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eig(&self.matrix)?.eigenvalues[0])
    }
}

/// One signed term `weight · M ρ M†` of a channel decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedKraus {
    pub weight: f64,
    pub operator: ComplexMatrix,
}

pub fn choi_reshuffle(s: &SuperOperator) -> ChoiMatrix {
    let s = s.to_convention(Convention::ColumnStacking);
    let d = s.dim();
    let m = s.matrix();
    let j = ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, a) = (row / d, row % d);
        let (jj, b) = (col / d, col % d);
        m[(jj * d + i, b * d + a)]
    });
    ChoiMatrix { matrix: j, dim: d }
}

/// Inverse of [`choi_reshuffle`]: `S[(p,q),(r,s)] = J[(q,s),(p,r)]`.
pub fn superop_from_choi(j: &ChoiMatrix) -> SuperOperator {
    let d = j.dim;
    let m = &j.matrix;
    let s = ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (p, q) = (row / d, row % d);
        let (r, s) = (col / d, col % d);
        m[(q * d + s, p * d + r)]
    });
    SuperOperator::new(s).expect("d²×d² by construction")
}

/// Diagonalizes `J` and returns every eigenpair with `|ν| > cutoff` as a signed
/// Kraus term, largest weight first.
///
/// Negative weights are kept: the linearized maps are not completely positive
/// and dropping them would change the channel.
pub fn extract_canonical_kraus(j: &ChoiMatrix, cutoff: f64) -> Result<Vec<WeightedKraus>> {
    if let Some((r, c)) = j.matrix.hermiticity_violation(CHOI_HERMITIAN_TOL) {
        return Err(Error::Validation(format!(
            "Choi matrix is not Hermitian at ({r}, {c})"
        )));
    }
    let spec = herm_eig(&j.matrix)?;
    let mut terms = Vec::new();
    for (k, &nu) in spec.eigenvalues.iter().enumerate().rev() {
        if nu.abs() > cutoff {
            terms.push(WeightedKraus {
                weight: nu,
                operator: unrvec(&spec.eigenvectors.column(k))?,
            });
        }
    }
    terms.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    Ok(terms)
}

/// `Σ ν conj(M) ⊗ M` over signed terms acting on `d×d` operators.
pub fn assemble_weighted(terms: &[WeightedKraus], dim: usize) -> SuperOperator {
    let n = dim * dim;
    let mut s = ComplexMatrix::zeros(n, n);
    for t in terms {
        s += &kron(&t.operator.conj(), &t.operator).scale_real(t.weight);
    }
    SuperOperator::new(s).expect("d²×d² by construction")
}
