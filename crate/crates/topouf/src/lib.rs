//! Union-Find decoders for 2D topological codes.
//!
//! This crate builds toric, rotated toric, surface, and rotated surface
//! codes, their decoding graphs (including space-time graphs for repeated
//! faulty syndrome extraction), and three decoders on top of a shared
//! union-find cluster engine and peeling core:
//!
//! * `UF` — syndrome validation followed by peeling, decoding X and Z
//!   errors independently.
//! * `IRUF` — iterated UF where each basis's correction seeds the other
//!   basis's erasure set.
//! * `UIUF` — union-intersection UF: qubits whose edges are covered by
//!   valid clusters in both graphs are promoted to erasures before the
//!   final UF passes, capturing correlated Y errors while keeping the
//!   floor((d-1)/2) correction guarantee.
//!
//! The `analysis` and `mc` modules add exhaustive undecodable-error
//! enumeration, weight-enumerator evaluation, Monte Carlo estimation of
//! logical error rates, finite-size threshold fitting, and decoder timing.

pub mod analysis;
pub mod cluster;
pub mod code;
pub mod combinat;
pub mod decoder;
pub mod graph;
pub mod noise;
pub mod pauli;
pub mod peel;

pub use code::{build_code, compute_syndrome, is_logical_failure, Basis, CodeFamily, CodeSpec};
pub use decoder::{Algorithm, Correction, Decoder, DecoderConfig};
pub use graph::{build_decoding_graph, DecodingGraph, EdgeMechanism};
pub use noise::{ErrorSample, NoiseParams};
pub use pauli::{Bits, PauliKind, PauliOp};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid code spec: {0}")]
    InvalidCodeSpec(String),
    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),
    #[error("residual has a nonzero syndrome; decoder contract violated")]
    ResidualHasSyndrome,
    #[error("malformed syndrome-validation input: {0}")]
    MalformedInput(String),
    #[error("unmatchable component in peeling: odd syndrome with no boundary")]
    UnmatchablePeel,
    #[error("enumeration of {required} cases exceeds the budget of {budget}")]
    EnumerationBudget { required: u128, budget: u128 },
    #[error("threshold fit rejected: {0}")]
    FitRejected(String),
    #[error("invalid run plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
