//! Coloured quiver mutation and the mutation class of the linear quiver `A_n`.
//!
//! Vertices are 0-based everywhere in this crate; the JSON format in [`json`]
//! is 1-based.

pub mod analysis;
pub mod canonical;
pub mod classifier;
pub mod enumeration;
pub mod error;
pub mod exec;
pub mod graph;
pub mod json;
pub mod mutation;
pub mod quiver;
pub mod reduction;

pub use canonical::{canonical_form, CanonicalForm};
pub use classifier::{is_member, CliqueDecomposition, Failure, MembershipVerdict};
pub use error::{QuiverError, Result};
pub use exec::ExecMode;
pub use mutation::{mutate_formula, mutate_power, mutate_steps, MutationSequence, MutationStep};
pub use quiver::{linear_quiver, Colour, ColouredQuiver, SimpleView, UnderlyingGraph, ValidationReport, Violation};
