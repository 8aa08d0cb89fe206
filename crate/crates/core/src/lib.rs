//! Finite-field coding library for minimum-bandwidth regenerating storage:
//! two MBR code constructions (regular-graph and product-matrix), a storage
//! lifecycle simulator, and block-security analysis of eavesdropped nodes
//! via brute-force minimum-distance oracles.

pub mod analysis;
pub mod code;
pub mod error;
pub mod ff;
pub mod graph;
pub mod graph_code;
pub mod matrix;
pub mod pm_code;
pub mod security;
pub mod sim;

pub use analysis::{
    determinability_check, mds_rows_check, min_distance, min_weight_witness, CodeView,
    WeightWitness, DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET,
};
pub use code::{AnyCode, DssCode, NodeData};
pub use error::{Error, Result};
pub use ff::{FieldElement, FieldSpec};
pub use graph::RegularGraph;
pub use graph_code::{GraphCode, HelperUnit, MatrixKind, NodeContent};
pub use matrix::{cauchy_matrix, vandermonde_matrix, MatrixFq};
pub use pm_code::{pack_message, unpack_message, IndexSetI, PmCode};
pub use security::{
    audit, block_security_level, degradation_profile, dimakis_bound, exhaustive_mi_check,
    pawar_bound, perfect_secrecy_check, solution_count_uniform, theorem1_level, theorem2_level,
    AuditMode, AuditReport, BoundsReport, MiOutcome, ObservationTable, ProfileRow, SecureWrap,
    SecurityReport, Witness,
};
pub use sim::{AdversaryState, DssState, Event};
