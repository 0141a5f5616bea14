//! Invariant suite run by `krausforge verify`.
//!
//! Each check reduces to a nonnegative figure compared against a bound. The
//! bounds scale with the model's noise strength where the underlying estimate
//! does; everything else is a fixed numerical tolerance.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kraus::{
    assemble, assemble_weighted, choi_reshuffle, closure_deficit, extract_canonical_kraus,
    synthesize, DEFAULT_CUTOFF,
};
use crate::model::QuantumSystem;
use crate::numerics::random::random_density;
use crate::numerics::ComplexMatrix;
use crate::superop::{
    build_generators, build_liouvillian, exact_map, first_order_map, infinitesimal_map,
};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tau: f64,
    /// Seed for the random states fed through the synthesized channel.
    pub seed: u64,
    pub states: usize,
    /// Tolerance for the checks that should hold to rounding.
    pub tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tau: 1.0,
            seed: 0,
            states: 8,
            tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub tau: f64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        writeln!(f, "{:width$}  result  value         bound", "check")?;
        for c in &self.checks {
            writeln!(
                f,
                "{:width$}  {:6}  {:<12.6e}  {:.6e}",
                c.name,
                if c.passed() { "pass" } else { "FAIL" },
                c.value,
                c.bound
            )?;
        }
        Ok(())
    }
}

fn max_anti_hermitian(m: &ComplexMatrix) -> f64 {
    (m - &m.adjoint()).max_abs()
}

/// Runs every check on `system` at `opts.tau`.
///
/// Model validation problems are returned as errors rather than failed checks.
pub fn verify(system: &QuantumSystem, opts: &VerifyOptions) -> Result<VerifyReport> {
    let report = system.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report.to_string()));
    }
    let tau = opts.tau;
    let tol = opts.tolerance;
    let g = system.rescale(tau)?;
    let eps = g.total_epsilon();
    let mut checks = Vec::new();
    let mut push = |name, value: f64, bound| checks.push(Check { name, value, bound });

    let gen = build_liouvillian(system, tau)?;
    let parts = build_generators(system, tau)?;
    let split = &(parts.conforming.matrix() + parts.jump.matrix()) - gen.matrix();
    let scale = gen.matrix().frobenius_norm().max(1.0);
    push("generator_split", split.frobenius_norm(), 1e-12 * scale);
    push(
        "generator_trace",
        infinitesimal_map(system, tau)?.trace_deficit(),
        1e-12 * scale,
    );

    let exact = exact_map(system, tau)?;
    push("exact_trace_preserving", exact.trace_deficit(), tol);
    let choi = choi_reshuffle(&exact);
    push(
        "exact_choi_hermitian",
        max_anti_hermitian(&choi.matrix),
        tol,
    );
    push(
        "exact_choi_positive",
        (-choi.min_eigenvalue()?).max(0.0),
        tol,
    );

    let ks = synthesize(system, tau)?;
    push("k0_contraction", (ks.k0_norm() - 1.0).max(0.0), tol);

    let mut worst = 0.0f64;
    for ((ch, list), (&e, q)) in system
        .channels
        .iter()
        .zip(&ks.corrections)
        .zip(ks.epsilons.iter().zip(&ks.quadratures))
    {
        let l = ch.collapse.frobenius_norm();
        for (k, w) in list.iter().zip(&q.weights) {
            let cap = 2.0 * (e * w).sqrt() * l;
            if cap > 0.0 {
                worst = worst.max(k.frobenius_norm() / cap);
            }
        }
    }
    push("correction_norms", worst, 1.0);

    let riemann: f64 = system
        .channels
        .iter()
        .zip(&ks.epsilons)
        .map(|(ch, e)| e / (ch.quadrature_count as f64).powi(2))
        .sum();
    push(
        "closure_deficit",
        closure_deficit(&ks),
        5.0 * (riemann + eps * eps) + tol,
    );

    let assembled = assemble(&ks);
    let first = first_order_map(system, tau)?;
    push(
        "first_order_agreement",
        assembled.distance(&first)?,
        3.0 * riemann + tol,
    );

    let terms = extract_canonical_kraus(&choi_reshuffle(&assembled), DEFAULT_CUTOFF)?;
    let back = assemble_weighted(&terms, system.dimension);
    push("choi_round_trip", back.distance(&assembled)?, tol);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut herm = 0.0f64;
    for _ in 0..opts.states {
        let rho = random_density(&mut rng, system.dimension);
        herm = herm.max(max_anti_hermitian(&ks.apply(&rho)?));
    }
    push("hermiticity_preserved", herm, 1e-12);

    let closed = system.with_rates_scaled(0.0);
    let unitary = assemble(&synthesize(&closed, tau)?).distance(&exact_map(&closed, tau)?)?;
    push("unitary_limit", unitary, tol);

    Ok(VerifyReport { tau, checks })
}
