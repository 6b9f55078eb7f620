//! Chain-recurrence structure on finite discretizations of compact
//! dynamical systems.
//!
//! The pipeline: an [`system::EvaluableSystem`] (map, metric, samples)
//! yields a [`gap::GapMatrix`] of jump costs `d(f(a), b)`; thresholding it
//! gives the eps-chain digraph on which everything else runs — reachability
//! and recurrent sets ([`relations`]), minimal-cost strong chains
//! ([`strong`]), nested chain families over decreasing schedules
//! ([`nested`]), and projected-orbit recurrence location ([`locator`]).

#![forbid(unsafe_code)]

pub mod error;
pub mod gap;
pub mod locator;
pub mod nested;
pub mod piecewise;
pub mod relations;
pub mod report;
pub mod scc;
pub mod strong;
pub mod subshift;
pub mod system;
pub mod word;

pub use error::Error;
pub use gap::{EpsGraph, GapMatrix};
pub use locator::{locate_all_components, locate_cr, ProjectedOrbit, TerminalComponent};
pub use nested::{
    covering_walk_feasible, nested_decide, nested_transitive_check, refine_chain, verify_nested,
    DecideMode, NestedFamily, NestedOutcome, Schedule, SearchLimits, UndecidedReason,
};
pub use relations::{
    chain_reaches, chain_reaches_within, chain_recurrent_set, internally_chain_transitive,
    reach_transitive, relation_nonwandering, relation_orbit, relation_recurrence,
    scc_terminal_components, Chain, StateChain, Verdict,
};
pub use scc::SccDecomposition;
pub use strong::{
    scr_family_intersection, strong_chain_recurrent_set, strong_chain_values, MetricTransform,
    StrongChainValues,
};
pub use subshift::{Subshift, SubshiftId};
pub use system::{
    builtin_system, grid_sample, BuiltinParams, EvaluableSystem, OrbitEnd, State, SystemConfig,
};
pub use word::Word;
