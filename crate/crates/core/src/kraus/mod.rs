//! Kraus-set synthesis, reassembly, closure, and the Choi oracle.

pub mod choi;
pub mod io;
pub mod quadrature;
pub mod synth;

pub use choi::{
    assemble_weighted, choi_reshuffle, extract_canonical_kraus, superop_from_choi, ChoiMatrix,
    WeightedKraus, DEFAULT_CUTOFF,
};
pub use quadrature::{
    custom_nodes, midpoint_nodes, trapezoid_interior_nodes, QuadratureKind, QuadratureScheme,
};
pub use synth::{
    assemble, channel_corrections, closure_deficit, dressed_phase_matrix, synthesize,
    synthesize_with, KrausSet,
};
