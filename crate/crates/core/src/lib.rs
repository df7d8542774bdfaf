//! Approximate counting and near-uniform sampling of witnesses, given only
//! a coloured independence oracle for the witness hypergraph.
//!
//! The entry points are [`count::count`] and [`sample::sample`]; the
//! [`problems`] module adapts k-SUM, k-OV, exact-weight k-clique and
//! colourful-subgraph deciders into oracles.

pub mod coarse;
pub mod count;
pub mod error;
pub mod hypergraph;
pub mod numeric;
pub mod oracle;
pub mod problems;
pub mod profile;
pub mod random;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
pub use hypergraph::{ColourClasses, Hypergraph};
pub use oracle::{Answer, IndependenceOracle, RunStats, View};
pub use profile::{ConstantsProfile, Scale};
