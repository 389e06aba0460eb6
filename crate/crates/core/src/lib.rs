//! Core algorithms for the triangle removal process on the complete
//! tripartite graph `K_{n,n,n}`.
//!
//! A partial Latin square of order `n` is a set of (row, column, symbol)
//! triples in which no pair of vertices is used twice. Removing the three
//! pairs of each triple from `K_{n,n,n}` yields its *leave graph*; the
//! triangle removal process repeatedly samples a uniformly random triangle
//! of the leave graph and removes it, growing an ordered partial Latin
//! square until the requested number of steps or until no triangle is left
//! (the process then *freezes*).
//!
//! The crate provides:
//!
//! - [`model`]: partial Latin squares, validation, grid view, text codecs;
//! - [`leave`]: the leave graph with incremental codegree bookkeeping and
//!   O(log n) weighted triangle sampling;
//! - [`process`]: the removal process, run outcomes and history replay;
//! - [`quasirand`]: codegree quasirandomness reports and the
//!   density-based triangle count prediction;
//! - [`coupling`]: the binomial hypergraph model, conflict deletion and the
//!   permutation coupling between the two;
//! - [`counting`]: exact completion counting (two independent backtracking
//!   strategies) and the closed-form bound formulas.
//!
//! The crate is `no_std` (alloc required); all floating point math goes
//! through [`libm`].

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
pub mod codec;
pub mod counting;
pub mod coupling;
pub mod fenwick;
pub mod leave;
pub mod math;
pub mod model;
pub mod process;
pub mod quasirand;
pub mod rng;

pub use leave::LeaveGraph;
pub use model::{GridView, Part, PartialLatinSquare, Triple, Vertex};
pub use process::{RunOutcome, TrpState};
