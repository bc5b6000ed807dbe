//! The bracketing engine: slice enumeration, follower graphs, and
//! certified entropy brackets.
//!
//! The pipeline runs in three stages. [`enumerate_slice`] builds the
//! exact per-length overapproximation `S_n` of a bound's language and
//! yields the upper bound `min_n (1/n) log |S_n|`. [`follower_graph`]
//! condenses the enumerated rows into a de Bruijn-style window graph.
//! [`ew_bracket`] then searches that graph for strongly connected
//! subsystems whose counts certify an attained entropy lower bound, and
//! [`verify_certificate`] replays every inequality of the result.

pub mod certificate;
pub mod graph;
pub mod slice;

pub use certificate::{
    certify_lower, ew_bracket, ew_bracket_sliced, min_experiment, pf_bracket,
    verify_certificate,
    Certificate, CertifyFailure, CertifyOptions, CertifyOutcome, EntropyBracket,
    MinExperiment,
};
pub use graph::{follower_graph, spectral_radius, tarjan_scc, FollowerGraph};
pub use slice::{
    enumerate_slice, enumerate_slice_rooted, merge_rooted, upper_bound, EnumBudget,
    Slice, UpperBound,
};
