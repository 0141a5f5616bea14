//! Closed-form Kraus operators for weakly dissipative Lindblad dynamics.
//!
//! The crate builds the vectorized Lindblad generator of a time-independent
//! system, its exact and first-order-in-noise propagators, and a Kraus set
//! whose coherent/dissipative interaction is resolved by a Riemann quadrature
//! over the Hamiltonian's transition phases. Everything is validated against
//! the exact superoperator and a Choi-diagonalization oracle.

pub mod bench;
pub mod error;
pub mod kraus;
pub mod model;
pub mod numerics;
pub mod superop;
pub mod verify;

pub use error::{Error, Result};
