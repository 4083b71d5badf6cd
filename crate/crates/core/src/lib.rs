//! Exact integer machinery for quiver-with-potential projections: exchange
//! matrices and their mutation, δ-vector and frame tracking, completions of
//! rigid weights, the projection search, and a randomized representation
//! oracle used to cross-check the combinatorics.

pub mod complement;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod projector;
pub mod search;
pub mod tracker;

pub use complement::{
    bongartz_certificate, extract_ceperp, find_exchange_index, mutate_complement, mutate_gamma,
    mutate_simples, ComplementFrame, GammaVector,
};
pub use error::{Error, Result};
pub use matrix::{IntMatrix, Seed};
pub use projector::{
    find_complement, lift_delta_candidates, project_full, project_multi, project_simple, pushforward_b,
    pushforward_delta, LiftFamily, MultiProjectionResult, ProjectionResult,
};
pub use search::{search_to_sign, MutationSequence, SearchOptions, SearchOutcome, Targets};
pub use tracker::{
    exchange_frame, mutate_delta, mutate_frame, track_frame, ClusterFrame, DeltaVector, Sign,
};
