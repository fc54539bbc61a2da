//! Poset embedding and existential first-order model checking on posets of
//! bounded width.
//!
//! A sentence `E x1. … E xq. M` is reduced to a family of pattern posets
//! ([`reduction`]), each decided by an embedding solver: the arc-consistency
//! CSP ([`csp`]) or the multicoloured-clique table ([`clique`]). [`oracle`]
//! holds the exhaustive references used in tests.

pub mod bits;
pub mod chains;
pub mod clique;
pub mod csp;
pub mod embedding;
pub mod format;
pub mod generators;
pub mod logic;
pub mod oracle;
pub mod poset;
pub mod reduction;

pub use chains::{dilworth, width_and_chain_partition, ChainPartition, WidthCertificate};
pub use embedding::{is_embedding, EmbeddingMap, SolveStats, SolverKind};
pub use logic::{parse, LogicError, Sentence};
pub use poset::{ElementId, Poset, PosetError, Relation};
pub use reduction::{model_check, CheckOptions, CheckOutcome, ReductionError};
