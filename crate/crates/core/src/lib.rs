//! Switch-search games on single-source directed acyclic (multi)graphs.
//!
//! A hidden switch assignment picks one out-edge per non-sink vertex; the
//! questioner asks up to `k` vertices per round and learns their switches. The
//! crate computes exact optimal round counts, runs strategy duels, and checks
//! closed-form bounds against the exact values.

pub mod formulas;
pub mod game;
pub mod generators;
pub mod graph;
pub mod reduce;
pub mod solver;
pub mod strategies;
pub mod verify;

pub use game::{GameError, Goal, Knowledge};
pub use graph::{EdgeIx, Graph, GraphBuilder, GraphError, SwitchAssignment, VertexIx};
