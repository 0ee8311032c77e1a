//! Finite-order actions on configurations of smooth rational curves.
//!
//! An action is recorded combinatorially: a permutation of the curves, the
//! exponent `c` of its action on the two-form, and for every stable curve
//! the exponents of its tangent action at its fixed points. The local rules
//! are
//!
//! * at a transverse fixed point of two stable curves the weights sum to `c`;
//! * at a tangency point the weights along the two branches agree;
//! * a stable curve either has weight 0 and is fixed pointwise, or has
//!   exactly two fixed points with weights `w` and `−w`, and then its moved
//!   points have orbits of length `n / gcd(n, w)`.
//!
//! Given one weight per connected piece of stable curves these rules
//! determine everything else, which [`propagate`] computes.

mod action;
mod config;
mod enumerate;
mod graphfile;

use thiserror::Error;

pub use action::{fixed_flags, propagate, Anchor, CensusItem, CurveState, FixedLocusCensus, Flag, GraphAction, PointKind};
pub use config::{CurveConfig, Permutation};
pub use enumerate::{enumerate_actions, MAX_ORDER, MAX_VERTICES};
pub use graphfile::{parse_anchor, parse_graph_file, to_dot, ActionSpec, GraphFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate vertex `{name}`")]
    DuplicateVertex { name: String },
    #[error("unknown vertex `{name}`")]
    UnknownVertex { name: String },
    #[error("invalid edge {a} -- {b}: {msg}")]
    InvalidEdge { a: String, b: String, msg: String },
    #[error("invalid permutation: {msg}")]
    InvalidPermutation { msg: String },
    #[error("unknown action `{name}`")]
    UnknownAction { name: String },
    #[error("permutation does not preserve the incidence graph")]
    NotAnAutomorphism,
    #[error("permutation has order {order}, which does not divide n = {n}")]
    PermutationOrder { order: u64, n: u32 },
    #[error("action order must lie in 1..={}", MAX_ORDER)]
    InvalidOrder,
    #[error("configuration has {vertices} curves, more than {max}")]
    ConfigTooLarge { vertices: usize, max: usize },
    #[error("`{flag}` is not a fixed point of a stable curve")]
    InvalidFlag { flag: String },
    #[error("anchor on curve {curve}, which the permutation moves")]
    AnchorOnMobileCurve { curve: String },
    #[error("weights around the cycle {} contradict each other", cycle.join(" - "))]
    InconsistentCycle { cycle: Vec<String> },
    #[error("curve {curve} would have {points} fixed points with weight {weight} != 0")]
    TooManyFixedPoints { curve: String, points: usize, weight: u32 },
    #[error("moved neighbor {neighbor} of {curve} has orbit length {orbit}, but the rotation of {curve} has order {expected}")]
    OrbitMismatch { curve: String, neighbor: String, orbit: usize, expected: usize },
    #[error("no anchor reaches the stable curve {curve}")]
    Unanchored { curve: String },
    #[error("actions are incompatible{}", curve.as_ref().map(|c| format!(" on curve {c}")).unwrap_or_default())]
    IncompatibleActions { curve: Option<String> },
}
