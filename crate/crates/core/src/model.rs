//! Problem definition: Hamiltonian, noise channels, validation and JSON I/O.
//!
//! Units are the caller's choice as long as they are consistent; the bundled
//! model uses rad/ns for the Hamiltonian, 1/ns for rates and ns for times.
//! Only the dimensionless products `H·τ` and `γ·τ` reach the numerics.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::random::{random_hermitian, random_matrix};
use crate::numerics::{spectral_norm, ComplexMatrix};

/// Hermiticity tolerance for Hamiltonians (max-entry norm of `H − H†`).
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const DEFAULT_QUADRATURE: usize = 10;

/// Above this total `Σ γ_ℓ τ` the linearization is flagged as leaving its regime.
pub const EPSILON_WARNING: f64 = 0.5;

const BUNDLED_MODEL: &str = include_str!("../data/example_3ls.json");

/// One dissipation channel: collapse operator `L`, rate `γ`, and the number of
/// quadrature nodes used for its interaction term.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseChannel {
    pub collapse: ComplexMatrix,
    pub rate: f64,
    pub quadrature_count: usize,
}

impl NoiseChannel {
    pub fn new(collapse: ComplexMatrix, rate: f64) -> Self {
        Self {
            collapse,
            rate,
            quadrature_count: DEFAULT_QUADRATURE,
        }
    }

    pub fn with_quadrature(mut self, n: usize) -> Self {
        self.quadrature_count = n;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumSystem {
    pub dimension: usize,
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<NoiseChannel>,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// JSON-style path of the offending member, e.g. `channels[0].rate`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every problem found by [`QuantumSystem::validate`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(first) => {
                let mut msg = first.message.clone();
                for v in &self.violations[1..] {
                    msg.push_str(&format!("; {v}"));
                }
                Err(Error::parse(first.path.clone(), msg))
            }
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl QuantumSystem {
    /// Builds and validates a system.
    pub fn new(hamiltonian: ComplexMatrix, channels: Vec<NoiseChannel>) -> Result<Self> {
        let sys = Self {
            dimension: hamiltonian.rows(),
            hamiltonian,
            channels,
            label: None,
        };
        sys.validate().into_result()?;
        Ok(sys)
    }

    /// A closed system with no dissipation.
    pub fn closed(hamiltonian: ComplexMatrix) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    /// Checks Hermiticity, dimension consistency, and channel parameters; never fails fast.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let d = self.dimension;
        if d < 2 {
            report.push(
                "dimension",
                format!("dimension must be at least 2, got {d}"),
            );
        }
        let h = &self.hamiltonian;
        if h.rows() != d || h.cols() != d {
            report.push(
                "hamiltonian",
                format!("expected {d}x{d}, got {}x{}", h.rows(), h.cols()),
            );
        } else if !h.is_finite() {
            report.push("hamiltonian", "non-finite entry");
        } else if let Some((i, j)) = h.hermiticity_violation(HERMITIAN_TOL) {
            report.push(
                format!("hamiltonian[{i}][{j}]"),
                format!(
                    "Hamiltonian is not Hermitian: H[{i}][{j}] = {} but conj(H[{j}][{i}]) = {}",
                    h[(i, j)],
                    h[(j, i)].conj()
                ),
            );
        }
        for (k, ch) in self.channels.iter().enumerate() {
            let m = &ch.collapse;
            if m.rows() != d || m.cols() != d {
                report.push(
                    format!("channels[{k}].matrix"),
                    format!("expected {d}x{d}, got {}x{}", m.rows(), m.cols()),
                );
            } else if !m.is_finite() {
                report.push(format!("channels[{k}].matrix"), "non-finite entry");
            }
            if !ch.rate.is_finite() || ch.rate < 0.0 {
                report.push(
                    format!("channels[{k}].rate"),
                    format!("rate must be finite and nonnegative, got {}", ch.rate),
                );
            }
            if ch.quadrature_count == 0 {
                report.push(
                    format!("channels[{k}].quadrature"),
                    "quadrature count must be at least 1",
                );
            }
        }
        report
    }

    /// Folds the evolution time into the generators.
    pub fn rescale(&self, tau: f64) -> Result<ScaledGenerators> {
        rescale(self, tau)
    }

    /// Copy of the system with every channel rate multiplied by `factor`.
    pub fn with_rates_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for ch in &mut out.channels {
            ch.rate *= factor;
        }
        out
    }

    /// Copy of the system with every channel using `n` quadrature nodes.
    pub fn with_quadrature(&self, n: usize) -> Self {
        let mut out = self.clone();
        for ch in &mut out.channels {
            ch.quadrature_count = n;
        }
        out
    }

    /// Total dissipation rate `Σ γ_ℓ`.
    pub fn total_rate(&self) -> f64 {
        self.channels.iter().map(|c| c.rate).sum()
    }
}

/// Generators made dimensionless by the evolution time.
#[derive(Clone, Debug)]
pub struct ScaledGenerators {
    /// `H·τ`
    pub h_tilde: ComplexMatrix,
    /// `γ_ℓ·τ` per channel
    pub epsilons: Vec<f64>,
    pub tau: f64,
    /// Set when `Σ ε_ℓ` exceeds [`EPSILON_WARNING`].
    pub warning: bool,
}

impl ScaledGenerators {
    pub fn total_epsilon(&self) -> f64 {
        self.epsilons.iter().sum()
    }
}

pub fn rescale(system: &QuantumSystem, tau: f64) -> Result<ScaledGenerators> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!(
            "evolution time must be positive, got {tau}"
        )));
    }
    let epsilons: Vec<f64> = system.channels.iter().map(|c| c.rate * tau).collect();
    let warning = epsilons.iter().sum::<f64>() > EPSILON_WARNING;
    Ok(ScaledGenerators {
        h_tilde: system.hamiltonian.scale_real(tau),
        epsilons,
        tau,
        warning,
    })
}

/// The three-level leaky qubit used throughout the examples:
///
/// ```text
/// H = [[0, Ω, 0], [Ω, 0, Ωη], [0, Ωη, −α]]
/// L = |0⟩⟨0| + |1⟩⟨0| + |1⟩⟨1| + |1⟩⟨2|
/// ```
pub fn three_level_leakage(
    omega: f64,
    alpha: f64,
    eta: f64,
    gamma: f64,
    quadrature: usize,
) -> QuantumSystem {
    let h = ComplexMatrix::from_real_rows(&[
        vec![0.0, omega, 0.0],
        vec![omega, 0.0, omega * eta],
        vec![0.0, omega * eta, -alpha],
    ])
    .expect("finite entries");
    let l = ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![1.0, 1.0, 1.0],
        vec![0.0, 0.0, 0.0],
    ])
    .expect("finite entries");
    let mut sys = QuantumSystem::new(
        h,
        vec![NoiseChannel::new(l, gamma).with_quadrature(quadrature)],
    )
    .expect("leakage model is valid");
    sys.label = Some("three-level leaky qubit".to_string());
    sys
}

/// Ω = π rad/ns, α = Ω/20, η = √2, γ = 0.01·Ω per ns, 10 quadrature nodes.
pub fn bundled_parameters() -> QuantumSystem {
    let omega = std::f64::consts::PI;
    three_level_leakage(
        omega,
        omega / 20.0,
        std::f64::consts::SQRT_2,
        0.01 * omega,
        DEFAULT_QUADRATURE,
    )
}

/// A random system for property sweeps.
///
/// `H` is a random Hermitian matrix rescaled to spectral norm `h_norm`; each of
/// the `channels` collapse operators is random with unit Frobenius norm and a
/// rate drawn uniformly from `(0, eps_max / channels]`, so that at `τ = 1`
/// the total `ε` never exceeds `eps_max`.
pub fn random_system<R: Rng + ?Sized>(
    rng: &mut R,
    dimension: usize,
    channels: usize,
    h_norm: f64,
    eps_max: f64,
) -> QuantumSystem {
    let h = random_hermitian(rng, dimension);
    let h = h.scale_real(h_norm / spectral_norm(&h));
    let per = eps_max / channels.max(1) as f64;
    let channels = (0..channels)
        .map(|_| {
            let l = random_matrix(rng, dimension, dimension);
            let l = l.scale_real(1.0 / l.frobenius_norm());
            let rate = per * (1.0 - rng.gen::<f64>());
            NoiseChannel::new(l, rate)
        })
        .collect();
    QuantumSystem::new(h, channels).expect("random system is valid")
}

/// The model shipped as `data/example_3ls.json`.
pub fn bundled_model() -> QuantumSystem {
    load_model(BUNDLED_MODEL).expect("bundled model parses")
}

pub fn bundled_model_json() -> &'static str {
    BUNDLED_MODEL
}

// ---- JSON ------------------------------------------------------------------

pub(crate) type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    dimension: usize,
    hamiltonian: RawMatrix,
    channels: Vec<RawChannel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    matrix: RawMatrix,
    rate: f64,
    #[serde(default = "default_quadrature")]
    quadrature: usize,
}

fn default_quadrature() -> usize {
    DEFAULT_QUADRATURE
}

pub(crate) fn matrix_to_raw(m: &ComplexMatrix) -> RawMatrix {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub(crate) fn matrix_from_raw(raw: &RawMatrix, path: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::parse(path, "matrix must be nonempty"));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::parse(path, e.to_string()))
}

/// Deserializes `T` reporting failures with the JSON path of the offending member.
pub(crate) fn from_json_with_path<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = match e.path().to_string() {
            p if p == "?" => ".".to_string(),
            p => p,
        };
        Error::parse(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::parse(".", e.to_string()))?;
    Ok(value)
}

/// Parses and validates a model document.
pub fn load_model(text: &str) -> Result<QuantumSystem> {
    let raw: RawModel = from_json_with_path(text)?;
    let hamiltonian = matrix_from_raw(&raw.hamiltonian, "hamiltonian")?;
    let channels = raw
        .channels
        .iter()
        .enumerate()
        .map(|(k, c)| {
            Ok(NoiseChannel {
                collapse: matrix_from_raw(&c.matrix, &format!("channels[{k}].matrix"))?,
                rate: c.rate,
                quadrature_count: c.quadrature,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sys = QuantumSystem {
        dimension: raw.dimension,
        hamiltonian,
        channels,
        label: raw.label,
    };
    sys.validate().into_result()?;
    Ok(sys)
}

/// Serializes a system in the model schema.
pub fn save_model(system: &QuantumSystem) -> String {
    let raw = RawModel {
        dimension: system.dimension,
        hamiltonian: matrix_to_raw(&system.hamiltonian),
        channels: system
            .channels
            .iter()
            .map(|c| RawChannel {
                matrix: matrix_to_raw(&c.collapse),
                rate: c.rate,
                quadrature: c.quadrature_count,
            })
            .collect(),
        label: system.label.clone(),
    };
    serde_json::to_string_pretty(&raw).expect("model serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_parse_error(text: &str, expected_path: &str) {
        match load_model(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, expected_path),
            other => panic!("expected parse error at {expected_path}, got {other:?}"),
        }
    }

    #[test]
    fn bundled_model_is_valid_and_matches_parameters() {
        let sys = bundled_model();
        assert!(sys.validate().is_ok());
        assert_eq!(sys, bundled_parameters());
        assert_eq!(sys.dimension, 3);
        assert_eq!(sys.channels.len(), 1);
        assert_eq!(sys.channels[0].quadrature_count, 10);
    }

    #[test]
    fn non_hermitian_hamiltonian_reported_at_entry() {
        let mut sys = bundled_parameters();
        sys.hamiltonian = ComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let report = sys.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].path, "hamiltonian[0][1]");
    }

    #[test]
    fn negative_rate_reported() {
        let mut sys = bundled_parameters();
        sys.channels[0].rate = -0.1;
        sys.channels[0].quadrature_count = 0;
        let report = sys.validate();
        let paths: Vec<&str> = report.violations.iter().map(|v| v.path.as_str()).collect();
        assert_eq!(paths, ["channels[0].rate", "channels[0].quadrature"]);
    }

    #[test]
    fn rescale_examples() {
        let sys = bundled_parameters();
        let g = sys.rescale(1.0).unwrap();
        assert!((g.epsilons[0] - 0.031_415_926_535_897_934).abs() < 1e-15);
        assert!(!g.warning);
        let g2 = sys.rescale(2.0).unwrap();
        assert_eq!(g2.epsilons[0], 2.0 * g.epsilons[0]);
        assert_eq!(g2.h_tilde, g.h_tilde.scale_real(2.0));
        let tiny = sys.rescale(1e-300).unwrap();
        assert!(tiny.h_tilde.max_abs() < 1e-299 && tiny.epsilons[0] < 1e-300);
        assert!(matches!(sys.rescale(0.0), Err(Error::Domain(_))));
        assert!(matches!(sys.rescale(-1.0), Err(Error::Domain(_))));
        assert!(sys.rescale(20.0).unwrap().warning);
    }

    #[test]
    fn closed_system_from_json() {
        let text =
            r#"{"dimension": 2, "hamiltonian": [[[0,0],[1,0]],[[1,0],[0,0]]], "channels": []}"#;
        let sys = load_model(text).unwrap();
        assert!(sys.channels.is_empty());
        assert_eq!(sys.label, None);
    }

    #[test]
    fn collapse_dimension_mismatch_path() {
        let text = r#"{"dimension": 2, "hamiltonian": [[[0,0],[1,0]],[[1,0],[0,0]]],
            "channels": [{"matrix": [[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]], "rate": 0.1}]}"#;
        assert_parse_error(text, "channels[0].matrix");
    }

    #[test]
    fn schema_errors_carry_paths() {
        assert_parse_error("{not json", ".");
        assert_parse_error(
            r#"{"dimension": 2, "hamiltonian": [[[0,0],[1,0]],[[1,0],[0,"x"]]], "channels": []}"#,
            "hamiltonian[1][1][1]",
        );
        assert_parse_error(
            r#"{"dimension": 2, "hamiltonian": [[[0,0],[1,0]],[[1,0],[0,0]]], "channels": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}]}"#,
            "channels[0]",
        );
        assert_parse_error(
            r#"{"dimension": 2, "hamiltonian": [[[0,0],[1,0]],[[1,0]]], "channels": []}"#,
            "hamiltonian",
        );
        assert_parse_error(
            r#"{"dimension": 2, "hamiltonian": [[[0,0],[1,0]],[[0,0],[0,0]]], "channels": []}"#,
            "hamiltonian[0][1]",
        );
        assert_parse_error(
            r#"{"dimension": 2, "hamiltonian": [], "channels": []}"#,
            "hamiltonian",
        );
    }

    #[test]
    fn save_then_load_is_exact() {
        let mut sys = bundled_parameters();
        sys.channels.push(
            NoiseChannel::new(
                ComplexMatrix::from_fn(3, 3, |i, j| {
                    Complex64::new(0.1 * i as f64, 1.0 / (j as f64 + 3.0))
                }),
                0.123_456_789_012_345_67,
            )
            .with_quadrature(7),
        );
        assert_eq!(load_model(&save_model(&sys)).unwrap(), sys);
    }
}
