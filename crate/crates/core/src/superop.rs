//! Superoperators in the natural (vectorized) representation.
//!
//! With column stacking, the Lindblad generator scaled by the evolution time is
//!
//! ```text
//! τ𝓛 = i H̃ᵀ⊗𝟙 − 𝟙⊗iH̃ + Σ_ℓ ε_ℓ [ L̄_ℓ⊗L_ℓ − ½((L†L)ᵀ_ℓ⊗𝟙 + 𝟙⊗(L†L)_ℓ) ]
//! ```
//!
//! and splits as `τ𝓛 = C + D` with `C = 𝒞 − D_⊕` (exponentiates to a single
//! Kraus term) and the jump part `D = Σ ε_ℓ L̄_ℓ⊗L_ℓ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{QuantumSystem, ScaledGenerators};
use crate::numerics::{
    expm, herm_eig, kron, kron_sum, l2_distance, unvec, vec, ComplexMatrix, SpectralDecomposition,
    I, ONE, ZERO,
};

/// Below this `|Δμ|` the interaction factor switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Vectorization layout a superoperator matrix is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `vec(M)[j·d + i] = M[i][j]`; the layout of every map built by this crate.
    ColumnStacking,
    /// `vec(M)[i·d + j] = M[i][j]`.
    RowStacking,
}

/// A `d²×d²` linear map on `d×d` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    matrix: ComplexMatrix,
    dim: usize,
    convention: Convention,
}

impl SuperOperator {
    /// Wraps a column-stacking matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_convention(matrix, Convention::ColumnStacking)
    }

    pub fn with_convention(matrix: ComplexMatrix, convention: Convention) -> Result<Self> {
        let n = matrix.check_square("superoperator")?;
        let dim = crate::numerics::kron::perfect_sqrt(n)?;
        Ok(Self {
            matrix,
            dim,
            convention,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim * dim),
            dim,
            convention: Convention::ColumnStacking,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Same map expressed in the other vectorization layout.
    pub fn to_convention(&self, convention: Convention) -> Self {
        if convention == self.convention {
            return self.clone();
        }
        // the two layouts differ by the swap (i, j) ↔ (j, i) on both indices
        let d = self.dim;
        let swap = |k: usize| (k % d) * d + k / d;
        let m = ComplexMatrix::from_fn(d * d, d * d, |r, c| self.matrix[(swap(r), swap(c))]);
        Self {
            matrix: m,
            dim: d,
            convention,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.convention != other.convention {
            return Err(Error::dim(format!(
                "vectorization convention mismatch: {:?} vs {:?}",
                self.convention, other.convention
            )));
        }
        if self.dim != other.dim {
            return Err(Error::dim(format!(
                "superoperator dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Frobenius distance between two maps in the same convention.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        l2_distance(&self.matrix, &other.matrix)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            dim: self.dim,
            convention: self.convention,
        })
    }

    /// Applies the map to a `d×d` operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::dim(format!(
                "operator is {}x{}, map acts on {}x{}",
                rho.rows(),
                rho.cols(),
                self.dim,
                self.dim
            )));
        }
        let v = match self.convention {
            Convention::ColumnStacking => vec(rho)?,
            Convention::RowStacking => crate::numerics::rvec(rho)?,
        };
        let out = self.matrix.apply(&v)?;
        match self.convention {
            Convention::ColumnStacking => unvec(&out),
            Convention::RowStacking => crate::numerics::unrvec(&out),
        }
    }

    /// `‖vec(𝟙)†S − vec(𝟙)†‖₂`: zero exactly when the map preserves trace.
    ///
    /// `vec(𝟙)` is the same vector in both layouts.
    pub fn trace_deficit(&self) -> f64 {
        let d = self.dim;
        let n = d * d;
        let mut s = 0.0;
        for c in 0..n {
            let mut acc = ZERO;
            for k in 0..d {
                acc += self.matrix[(k * d + k, c)];
            }
            if c % (d + 1) == 0 {
                acc -= ONE;
            }
            s += acc.norm_sqr();
        }
        s.sqrt()
    }
}

/// Ingredients of `τ𝓛 = C + D`.
#[derive(Clone, Debug)]
pub struct Generators {
    /// `𝒞 = (−iH̃)* ⊕ (−iH̃)`
    pub coherent: SuperOperator,
    /// `D_⊕ = ½ Σ_ℓ (ε_ℓ L†L)* ⊕ (ε_ℓ L†L)`
    pub damping: SuperOperator,
    /// `D = Σ_ℓ ε_ℓ L̄_ℓ ⊗ L_ℓ`
    pub jump: SuperOperator,
    /// `C = 𝒞 − D_⊕`
    pub conforming: SuperOperator,
}

fn validated(system: &QuantumSystem, tau: f64) -> Result<ScaledGenerators> {
    let report = system.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report.to_string()));
    }
    system.rescale(tau)
}

/// `Σ_ℓ ε_ℓ L†_ℓ L_ℓ`
pub(crate) fn damping_operator(system: &QuantumSystem, g: &ScaledGenerators) -> ComplexMatrix {
    let d = system.dimension;
    let mut acc = ComplexMatrix::zeros(d, d);
    for (ch, &eps) in system.channels.iter().zip(&g.epsilons) {
        let l = &ch.collapse;
        acc += &(&l.adjoint() * l).scale_real(eps);
    }
    acc
}

/// `−iH̃ − ½ Σ_ℓ ε_ℓ L†_ℓ L_ℓ`, the generator of the no-jump propagator.
pub(crate) fn effective_generator(system: &QuantumSystem, g: &ScaledGenerators) -> ComplexMatrix {
    let mut a = g.h_tilde.scale(-I);
    a -= &damping_operator(system, g).scale_real(0.5);
    a
}

pub fn build_generators(system: &QuantumSystem, tau: f64) -> Result<Generators> {
    let g = validated(system, tau)?;
    let d = system.dimension;
    let minus_ih = g.h_tilde.scale(-I);
    let coherent = kron_sum(&minus_ih.conj(), &minus_ih)?;

    let half_damp = damping_operator(system, &g).scale_real(0.5);
    let damping = kron_sum(&half_damp.conj(), &half_damp)?;

    let mut jump = ComplexMatrix::zeros(d * d, d * d);
    for (ch, &eps) in system.channels.iter().zip(&g.epsilons) {
        let l = &ch.collapse;
        jump += &kron(&l.conj(), l).scale_real(eps);
    }
    let conforming = &coherent - &damping;
    Ok(Generators {
        coherent: SuperOperator::new(coherent)?,
        damping: SuperOperator::new(damping)?,
        jump: SuperOperator::new(jump)?,
        conforming: SuperOperator::new(conforming)?,
    })
}

/// The time-scaled Lindblad generator `τ𝓛`, assembled term by term.
pub fn build_liouvillian(system: &QuantumSystem, tau: f64) -> Result<SuperOperator> {
    let g = validated(system, tau)?;
    let d = system.dimension;
    let id = ComplexMatrix::identity(d);
    let h = &g.h_tilde;

    let mut gen = kron(&h.transpose().scale(I), &id);
    gen -= &kron(&id, &h.scale(I));
    for (ch, &eps) in system.channels.iter().zip(&g.epsilons) {
        let l = &ch.collapse;
        let ldl = &l.adjoint() * l;
        let mut term = kron(&l.conj(), l);
        term -= &kron(&ldl.transpose(), &id).scale_real(0.5);
        term -= &kron(&id, &ldl).scale_real(0.5);
        gen += &term.scale_real(eps);
    }
    SuperOperator::new(gen)
}

/// Ground truth `K_Φ = exp(τ𝓛)`.
pub fn exact_map(system: &QuantumSystem, tau: f64) -> Result<SuperOperator> {
    let gen = build_liouvillian(system, tau)?;
    SuperOperator::new(expm(gen.matrix()))
}

/// First order in time: `𝟙 + τ𝓛`.
pub fn infinitesimal_map(system: &QuantumSystem, tau: f64) -> Result<SuperOperator> {
    let gen = build_liouvillian(system, tau)?;
    let mut m = gen.into_matrix();
    m += &ComplexMatrix::identity(m.rows());
    SuperOperator::new(m)
}

/// `R(Δμ) = ∫₀¹ e^{−iΔμ t} dt = (1 − e^{−iΔμ}) / (iΔμ)`.
pub fn interaction_factor(delta_mu: f64) -> Complex64 {
    let x = delta_mu;
    if x.abs() < SERIES_THRESHOLD {
        // 1 − ix/2 − x²/6 + ix³/24
        Complex64::new(1.0 - x * x / 6.0, -x / 2.0 + x * x * x / 24.0)
    } else {
        (ONE - (-I * x).exp()) / (I * x)
    }
}

/// Interaction factors between every pair of coherent-basis states.
#[derive(Clone, Debug)]
pub struct InteractionMatrix {
    /// `R[i][j]` with composite index `i = i_a·d + i_b`.
    pub entries: ComplexMatrix,
    /// `μ_i = λ_{i_a} − λ_{i_b}`.
    pub mu: Vec<f64>,
}

pub fn interaction_matrix(spec: &SpectralDecomposition) -> InteractionMatrix {
    let d = spec.dim();
    let lam = &spec.eigenvalues;
    let mu: Vec<f64> = (0..d * d).map(|i| lam[i / d] - lam[i % d]).collect();
    let entries = ComplexMatrix::from_fn(d * d, d * d, |i, j| {
        if i == j {
            ONE
        } else {
            interaction_factor(mu[i] - mu[j])
        }
    });
    InteractionMatrix { entries, mu }
}

/// `W = V̄ ⊗ V`: column `i_a·d + i_b` is the coherent eigenvector `|i_a⟩* ⊗ |i_b⟩`.
pub fn coherent_basis(spec: &SpectralDecomposition) -> ComplexMatrix {
    let v = &spec.eigenvectors;
    kron(&v.conj(), v)
}

/// Linear-in-noise map `exp(C) · (𝟙 + W (D̃ ⊙ R) W†)` with `D̃ = W† D W`.
pub fn first_order_map(system: &QuantumSystem, tau: f64) -> Result<SuperOperator> {
    let gens = build_generators(system, tau)?;
    let g = system.rescale(tau)?;
    let spec = herm_eig(&g.h_tilde)?;
    let w = coherent_basis(&spec);
    let r = interaction_matrix(&spec);

    let d_coh = &(&w.adjoint() * gens.jump.matrix()) * &w;
    let dressed = d_coh.hadamard(&r.entries)?;
    let mut correction = &(&w * &dressed) * &w.adjoint();
    correction += &ComplexMatrix::identity(correction.rows());

    let prop = expm(gens.conforming.matrix());
    SuperOperator::new(&prop * &correction)
}
