//! Probabilistic logic over manifestly true / manifestly false / undecidable
//! propositions.
//!
//! The crate is organised bottom-up:
//!
//! - [`logic`]: the three-valued (TFU) Boolean algebra over complete states,
//!   plus a small propositional [`Formula`](logic::Formula) language.
//! - [`ctp`]: classical probability written as real state vectors and
//!   diagonal projectors over the `2^n` complete states.
//! - [`measure`]: TFU probability as a ratio of measures over the `3^n`
//!   TFU cells, including the decidability-augmented classical reading.
//! - [`quantum`]: the complex realization with general Hermitian projectors,
//!   Born-rule probabilities and sequential conditioning.
//! - [`inequality`]: the Wigner–d'Espagnat inequality in its classical, set
//!   level TFU, and projector forms, with a deterministic violation search.
//!
//! Every operation is a pure function over immutable values.

pub mod ctp;
pub mod inequality;
pub mod logic;
pub mod measure;
pub mod quantum;

/// Default tolerance for numeric identities and unit-norm checks.
pub const TOLERANCE: f64 = 1e-12;
