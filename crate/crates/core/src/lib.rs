//! Finite-model laboratory for increasing chains of topologies.
//!
//! Topologies on up to 16 points are represented by bitmasks. On top of that
//! the crate computes the step operation `(σ, τ)` and the slowest filtration
//! it generates, validates filtrations and weak filtrations, evaluates the
//! tame/slight/solid set calculi, approximates equivalence relations by
//! closures along a filtration, enumerates every topology on small ground
//! sets, and runs exhaustive checks of the finite instances of the theory.

pub mod cli;
pub mod enumeration;
pub mod equiv;
pub mod error;
pub mod filtration;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use topology::{join, make_topology, BuildMode, SetFamily, SubsetMask, Topology};
