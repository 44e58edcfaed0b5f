//! Geometric tree graphs of planar point sets, and recovery of the crossing
//! structure of `K(P)` from the bare, unlabelled tree graph.
//!
//! The pipeline, bottom-up:
//!
//! * [`geometry`]: exact integer orientation and crossing predicates.
//! * [`enumerate`] and [`treegraph`]: all simple spanning trees and the
//!   graph of single-edge exchanges between them.
//! * [`analysis`]: distances and maximal cliques of an abstract tree graph.
//! * [`reconstruct`]: U/I typing of cliques, stars, brushes and the crossing
//!   relation, computed from the abstract graph alone.
//! * [`abstract_kn`]: the same idea for the tree graph of `K_n`, recovering
//!   every tree up to a relabelling, plus an automorphism counter.
//! * [`harness`]: instance files, generators, reports and SVG output.
//!
//! With the default `parallel` feature the per-edge, per-star and per-tree
//! loops run on rayon; without it everything runs sequentially.

pub mod abstract_kn;
pub mod analysis;
pub mod automorphism;
pub mod enumerate;
pub mod geometry;
pub mod harness;
mod par;
pub mod reconstruct;
pub mod tree;
pub mod treegraph;

pub use par::is_parallel;
