//! Skew-symmetrizable exchange matrices, their diagrams and mutations, and
//! decomposition of diagrams into the blocks of a fixed catalog.

pub mod assembly;
pub mod canon;
pub mod catalog;
pub mod classify;
pub mod decompose;
pub mod error;
pub mod format;
pub mod model;
pub mod mutation;
pub mod oracle;
pub mod unfold;

pub use assembly::{
    assemble, surface_invariants, validate_decomposition, Decomposition, Footprint, Mismatch,
    PlacedBlock, SurfaceInvariants,
};
pub use canon::{canonical_form, canonical_labelling, CanonicalForm};
pub use catalog::{catalog, template, unfold_block, BlockKind, BlockTemplate, BlockUnfolding};
pub use classify::{classify, classify_diagram, ClassifyOptions, Evidence, OutcomeKind, Verdict};
pub use decompose::{
    block_decompose, gate, reduce, residual_after, s_decompose, Certificate, DecomposeOptions,
    Outcome, Reduction, ReductionTrace, TraceEntry,
};
pub use error::{Error, Result};
pub use model::{
    is_skew_symmetrizable, matrix_to_diagram, matrix_to_quiver, quiver_adjacency_matrix, Color,
    Diagram, Edge, ExchangeMatrix, Matrix, NodeId, Quiver, Skewsymmetrizer,
};
pub use mutation::{
    composite_mutate, mutate_diagram, mutate_matrix, mutate_sequence, scan_mutation_class,
    ScanLimits, ScanOutcome,
};
pub use oracle::{oracle_decompose, oracle_is_finite, Finiteness, OracleDecompositions};
pub use unfold::{
    build_unfolding, check_commutation, composite_flip_commutes, realize, Commutation, Unfolding,
};
