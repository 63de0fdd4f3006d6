//! Rule-based sequential graph coloring.
//!
//! The crate is organized around a small solver loop: an ordered graph
//! carries per-vertex color lists, and a rule-base of local list-shrinking
//! rules is applied vertex by vertex, round after round, until every list is
//! a singleton (success), some list empties (failure), or nothing changes
//! (stable failure).
//!
//! On top of the solver sit:
//!
//! - [`sds`] — exact search for weak/strong sequential defining sets: the
//!   smallest seed sets (or cheapest, counting rounds) from which the solver
//!   recovers a given coloring.
//! - [`gadgets`] — constructors for the forcing gadget families used by the
//!   hardness reductions, and the reduction builders themselves.
//! - [`oracle`] — brute-force enumeration of list colorings, unique
//!   colorability checks, and transverse-system verification; the ground
//!   truth everything else is audited against.
//! - [`io`] — JSON interchange for instances, rule-bases, and witnesses,
//!   plus DOT export.

pub mod embed;
pub mod engine;
mod error;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod marked;
pub mod oracle;
pub mod rulebase;
pub mod sds;

pub use error::Error;
pub use graph::{Color, ColorSet, Coloring, Graph, VertexId, VertexOrder};
pub use marked::{Label, MarkedGraph};
