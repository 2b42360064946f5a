//! Splitting ground disjunctive logic programs.
//!
//! * [`text`]: the rule format (`a | b :- c, not d.`).
//! * [`graph`]: dependency graph, SCC condensation, `scc`/`tree` queries.
//! * [`split`]: splitting-set predicates and the uniform-cost search for a
//!   smallest nontrivial splitting set.
//! * [`semantics`]: reduct, stable models, proofs, `reduce`, and evaluation
//!   through (g-)splitting sets.
//! * [`experiment`]: random programs and splitting-set statistics.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod atoms;
pub mod experiment;
pub mod graph;
pub mod program;
pub mod semantics;
pub mod split;
pub mod text;

pub use atoms::{AtomId, AtomSet, SymbolTable};
pub use graph::{build_dep_graph, build_super_graph, is_hcf, DepGraph, SccId, SuperDepGraph};
pub use program::{atoms_of_rule, Program, Rule};
pub use semantics::Interpretation;
pub use split::{min_g_splitting_set, min_splitting_set, SplitGoal};
pub use text::{parse_program, render_program};
