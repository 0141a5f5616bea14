//! Kraus-set synthesis from the coherent-basis quadrature factorization.
//!
//! The interaction factor `R_ij = ∫₀¹ e^{−i(μ_i−μ_j)t} dt` (with
//! `μ_i = λ_{i_a} − λ_{i_b}`) does not factor over the two halves of the
//! composite index, but each quadrature sample does:
//! `e^{−i(μ_i−μ_j)τ_k} = conj(e^{i(λ_{i_a}−λ_{j_a})τ_k}) · e^{i(λ_{i_b}−λ_{j_b})τ_k}`.
//! Each node therefore contributes one Kraus operator per channel,
//!
//! ```text
//! K_k^(ℓ) = K₀ · √ε_ℓ · V (L̃_ℓ ⊙ R^(k)) V†,   L̃_ℓ = V† L_ℓ V,
//! R^(k)[m][n] = √Δ_k · e^{i(λ_m − λ_n)τ_k},
//! ```
//!
//! with `K₀ = exp(−iH̃ − ½ Σ ε_ℓ L†_ℓ L_ℓ)`. Equivalently
//! `V (L̃ ⊙ R^(k)) V† = √Δ_k · e^{iH̃τ_k} L e^{−iH̃τ_k}`, the collapse operator
//! in the interaction picture at time `τ_k`.

use crate::error::{Error, Result};
use crate::model::QuantumSystem;
use crate::numerics::{
    expm, herm_eig, kron, spectral_norm, ComplexMatrix, SpectralDecomposition, I,
};
use crate::superop::{effective_generator, SuperOperator};

use super::quadrature::{midpoint_nodes, QuadratureScheme};

/// `K₀` together with its per-channel, per-node corrections.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    pub dim: usize,
    pub k0: ComplexMatrix,
    /// `corrections[ℓ][k]` is `K_k^(ℓ)`.
    pub corrections: Vec<Vec<ComplexMatrix>>,
    /// `ε_ℓ = γ_ℓ τ` used for each channel.
    pub epsilons: Vec<f64>,
    /// Quadrature used for each channel.
    pub quadratures: Vec<QuadratureScheme>,
}

impl KrausSet {
    /// A set holding only `K₀`.
    pub fn single(k0: ComplexMatrix) -> Self {
        Self {
            dim: k0.rows(),
            k0,
            corrections: Vec::new(),
            epsilons: Vec::new(),
            quadratures: Vec::new(),
        }
    }

    /// All operators in `(K₀, ℓ-major, k-minor)` order.
    pub fn operators(&self) -> impl Iterator<Item = &ComplexMatrix> {
        std::iter::once(&self.k0).chain(self.corrections.iter().flatten())
    }

    pub fn len(&self) -> usize {
        1 + self.corrections.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `ρ ↦ Σ K ρ K†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in self.operators() {
            out += &(&k.matmul(rho)? * &k.adjoint());
        }
        Ok(out)
    }

    /// Spectral norm of `K₀`; at most one up to rounding since `K₀` is a contraction.
    pub fn k0_norm(&self) -> f64 {
        spectral_norm(&self.k0)
    }
}

/// The sampled phase matrix `R^(k)[m][n] = √Δ_k e^{i(λ_m − λ_n)τ_k}` in the eigenbasis of `spec`.
pub fn dressed_phase_matrix(spec: &SpectralDecomposition, node: f64, weight: f64) -> ComplexMatrix {
    let lam = &spec.eigenvalues;
    let d = lam.len();
    let s = weight.sqrt();
    ComplexMatrix::from_fn(d, d, |m, n| (I * ((lam[m] - lam[n]) * node)).exp() * s)
}

/// Corrections `K_k^(ℓ)` of one channel for every node of `scheme`.
///
/// `spec` must diagonalize the scaled Hamiltonian `H̃`; `k0` is the shared
/// no-jump propagator.
pub fn channel_corrections(
    k0: &ComplexMatrix,
    spec: &SpectralDecomposition,
    collapse: &ComplexMatrix,
    epsilon: f64,
    scheme: &QuadratureScheme,
) -> Result<Vec<ComplexMatrix>> {
    let v = &spec.eigenvectors;
    let vh = v.adjoint();
    let l_coh = &(&vh * collapse) * v;
    let root_eps = epsilon.sqrt();
    let k0v = (k0 * v).scale_real(root_eps);
    scheme
        .iter()
        .map(|(node, weight)| {
            let dressed = l_coh.hadamard(&dressed_phase_matrix(spec, node, weight))?;
            Ok(&(&k0v * &dressed) * &vh)
        })
        .collect()
}

/// Synthesizes the Kraus set using each channel's midpoint quadrature count.
pub fn synthesize(system: &QuantumSystem, tau: f64) -> Result<KrausSet> {
    let schemes = system
        .channels
        .iter()
        .map(|c| midpoint_nodes(c.quadrature_count))
        .collect::<Result<Vec<_>>>()?;
    synthesize_with(system, tau, &schemes)
}

/// Synthesizes with an explicit quadrature per channel.
pub fn synthesize_with(
    system: &QuantumSystem,
    tau: f64,
    schemes: &[QuadratureScheme],
) -> Result<KrausSet> {
    let report = system.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report.to_string()));
    }
    if schemes.len() != system.channels.len() {
        return Err(Error::dim(format!(
            "{} quadrature schemes for {} channels",
            schemes.len(),
            system.channels.len()
        )));
    }
    for q in schemes {
        q.validate()?;
    }
    let g = system.rescale(tau)?;
    let k0 = expm(&effective_generator(system, &g));
    let spec = herm_eig(&g.h_tilde)?;

    let corrections = system
        .channels
        .iter()
        .zip(&g.epsilons)
        .zip(schemes)
        .map(|((ch, &eps), q)| channel_corrections(&k0, &spec, &ch.collapse, eps, q))
        .collect::<Result<Vec<_>>>()?;

    Ok(KrausSet {
        dim: system.dimension,
        k0,
        corrections,
        epsilons: g.epsilons,
        quadratures: schemes.to_vec(),
    })
}

/// Natural representation `Σ conj(K) ⊗ K` of the Kraus set.
pub fn assemble(ks: &KrausSet) -> SuperOperator {
    let n = ks.dim * ks.dim;
    let mut m = ComplexMatrix::zeros(n, n);
    for k in ks.operators() {
        m += &kron(&k.conj(), k);
    }
    SuperOperator::new(m).expect("d²×d² by construction")
}

/// `‖Σ K†K − 𝟙‖_F`.
pub fn closure_deficit(ks: &KrausSet) -> f64 {
    let mut acc = ComplexMatrix::identity(ks.dim).scale_real(-1.0);
    for k in ks.operators() {
        acc += &(&k.adjoint() * k);
    }
    acc.frobenius_norm()
}
