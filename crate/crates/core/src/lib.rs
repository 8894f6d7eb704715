//! Bipartite spin-correlation toolkit: quantum singlet predictions, machine-checkable
//! Bell-locality conditions for hidden-state models, and exact local-hidden-variable
//! analysis via polytope membership.
//!
//! The crate is organized around one question: can the joint outcome statistics of a
//! two-particle spin experiment be explained by a model in which each measurement
//! outcome depends only on local facts?
//!
//! - [`scenario`] — measurement directions, scenarios, and behaviors (full conditional
//!   probability tables `P(A,B | setting pair)`), with validation and a behavior-level
//!   no-signalling check.
//! - [`quantum`] — the analytic singlet-state predictions: joint outcome probabilities
//!   `(1/2)sin²(θ/2)` / `(1/2)cos²(θ/2)`, uniform single-side marginals, correlations
//!   `E = −cos θ`, and a reproducible seeded sampler.
//! - [`locality`] — Parameter Independence, Outcome Independence, and factorization
//!   checks for finite mixtures of hidden states, plus the derivation engine that shows
//!   factorization + completeness forces the all-1/4 table, contradicting the singlet
//!   predictions.
//! - [`lhv`] — deterministic-strategy enumeration, linear-programming membership in the
//!   local polytope, CHSH values, and the two-part composition of both arguments.
//! - [`simplex`] — the dense two-phase simplex solver backing the polytope analysis.
//!
//! All checks are evaluated per hidden state, never on the mixture: locality is a
//! condition on complete state specifications, and mixtures of local states can show
//! correlations without any nonlocality.

pub mod error;
pub mod lhv;
pub mod locality;
pub mod quantum;
pub mod rng;
pub mod scenario;
pub mod simplex;

mod json_util;

pub use error::{Error, Result};

/// Default numerical tolerance used wherever a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;
