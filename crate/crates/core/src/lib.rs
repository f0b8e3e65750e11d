//! Marker reprogramming of locally-monotone Boolean networks under
//! most-permissive dynamics.
//!
//! Networks are read from BooleanNet text, compiled into unate local
//! functions, and analysed through sub-hypercubes: smallest trap spaces,
//! fixed points and minimal trap spaces (the MP attractors). On top of that
//! the crate finds minimal perturbations that make fixed points or
//! attractors match a marker, for single networks and for ensembles.

pub mod bnet;
pub mod candidates;
pub mod dynamics;
pub mod ensembles;
pub mod error;
pub mod generate;
pub mod json;
pub mod limits;
pub mod network;
pub mod oracle;
pub mod reprogramming;
pub mod state;
pub mod unate;

pub use bnet::{parse_booleannet, serialize_booleannet};
pub use dynamics::{
    attractor_reachable, fixed_points, in_attractor, minimal_trap_spaces, smallest_trap_space,
};
pub use ensembles::{enumerate_domain, Domain, Quantifier};
pub use error::{Error, Result};
pub use limits::Limits;
pub use network::{BooleanNetwork, ComponentId, Expr};
pub use reprogramming::{solve, solve_with, Framing, Problem, ReprogramQuery, SolutionSet, Target};
pub use state::{Configuration, PartialAssignment, Subhypercube};
pub use unate::{influence_graph, InfluenceGraph, LocalFunction, MonotoneNetwork, Sign};
