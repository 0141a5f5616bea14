//! Quadrature rules on `[0, 1]` for resolving the interaction factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    /// Uniform widths `1/N`, nodes at cell midpoints. Second order.
    Midpoint,
    /// Nodes `k/(N+1)`; trapezoid weights with the endpoint values taken
    /// from the nearest interior node. First order.
    TrapezoidInterior,
    Custom,
}

/// Nodes `τ_k ∈ [0, 1]` and weights `Δ_k > 0` summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureScheme {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureScheme {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(τ_k, Δ_k)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Checks the scheme's invariants.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() || self.nodes.len() != self.weights.len() {
            return Err(Error::domain(format!(
                "quadrature needs matching nonempty nodes/weights, got {} and {}",
                self.nodes.len(),
                self.weights.len()
            )));
        }
        if self.nodes.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::domain("quadrature nodes must lie in [0, 1]"));
        }
        if self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(
                "quadrature nodes must be strictly increasing",
            ));
        }
        if self.weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::domain("quadrature weights must be positive"));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL * self.weights.len().max(1) as f64 {
            return Err(Error::domain(format!(
                "quadrature weights sum to {sum}, not 1"
            )));
        }
        Ok(())
    }
}

/// `Δ_k = 1/N`, `τ_k = (2k − 1)/(2N)` for `k = 1..N`.
pub fn midpoint_nodes(n: usize) -> Result<QuadratureScheme> {
    if n == 0 {
        return Err(Error::domain("midpoint rule needs at least one node"));
    }
    let nf = n as f64;
    Ok(QuadratureScheme {
        kind: QuadratureKind::Midpoint,
        nodes: (1..=n).map(|k| (2 * k - 1) as f64 / (2.0 * nf)).collect(),
        weights: vec![1.0 / nf; n],
    })
}

pub fn trapezoid_interior_nodes(n: usize) -> Result<QuadratureScheme> {
    if n == 0 {
        return Err(Error::domain("trapezoid rule needs at least one node"));
    }
    let h = 1.0 / (n as f64 + 1.0);
    let mut weights = vec![h; n];
    weights[0] += 0.5 * h;
    weights[n - 1] += 0.5 * h;
    Ok(QuadratureScheme {
        kind: QuadratureKind::TrapezoidInterior,
        nodes: (1..=n).map(|k| k as f64 * h).collect(),
        weights,
    })
}

pub fn custom_nodes(nodes: Vec<f64>, weights: Vec<f64>) -> Result<QuadratureScheme> {
    let q = QuadratureScheme {
        kind: QuadratureKind::Custom,
        nodes,
        weights,
    };
    q.validate()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_small_cases() {
        let q = midpoint_nodes(1).unwrap();
        assert_eq!(q.nodes, vec![0.5]);
        assert_eq!(q.weights, vec![1.0]);
        let q = midpoint_nodes(2).unwrap();
        assert_eq!(q.nodes, vec![0.25, 0.75]);
        assert_eq!(q.weights, vec![0.5, 0.5]);
        assert!(matches!(midpoint_nodes(0), Err(Error::Domain(_))));
    }

    #[test]
    fn midpoint_weights_sum_to_one() {
        for n in [1, 3, 7, 10, 50, 999, 10_000] {
            let q = midpoint_nodes(n).unwrap();
            q.validate().unwrap();
            let s: f64 = q.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-14 * n as f64, "n={n}: {s}");
            assert!(q.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
        }
    }

    #[test]
    fn trapezoid_interior_valid() {
        for n in [1, 2, 5, 40] {
            trapezoid_interior_nodes(n).unwrap().validate().unwrap();
        }
        let q = trapezoid_interior_nodes(1).unwrap();
        assert_eq!(q.nodes, vec![0.5]);
        assert_eq!(q.weights, vec![1.0]);
    }

    #[test]
    fn custom_rejects_bad_rules() {
        assert!(custom_nodes(vec![0.0, 1.0], vec![0.5, 0.5]).is_ok());
        assert!(custom_nodes(vec![0.5, 0.2], vec![0.5, 0.5]).is_err());
        assert!(custom_nodes(vec![0.2, 0.5], vec![0.5, 0.6]).is_err());
        assert!(custom_nodes(vec![0.2, 1.5], vec![0.5, 0.5]).is_err());
        assert!(custom_nodes(vec![0.2], vec![1.0, 0.0]).is_err());
        assert!(custom_nodes(vec![], vec![]).is_err());
        assert!(custom_nodes(vec![0.1, 0.2], vec![1.0, 0.0]).is_err());
    }
}
