//! Point-line geometries over small finite fields, their collinearity graphs,
//! and the machinery to go back and forth between the two.
//!
//! The crate covers four layers:
//!
//! * [`algebra`]: arithmetic tables for GF(q) with q <= 9, reduced-echelon
//!   subspaces, and alternating/quadratic forms with their singular subspaces.
//! * [`graph`]: bit-packed undirected graphs with the closed-perp operator,
//!   local graphs, clique extensions, colour refinement and isomorphism
//!   testing, plus graph6/sparse6 I/O.
//! * [`geometry`] and [`generators`]: partial linear spaces with axiom
//!   checkers (gamma, Shult, parapolar, grid, projective), and generators for
//!   symplectic/orthogonal polar spaces, line Grassmannians and half-spin
//!   geometries.
//! * [`reconstruct`] and [`recognize`]: recover the line set of a geometry
//!   from its collinearity graph alone (rays, extended rays, plane spans) and
//!   classify which family the graph belongs to, with structured evidence and
//!   diagnostics.
//!
//! Everything is deterministic: generators enumerate in a fixed order,
//! reductions are ordered, and outputs are byte-identical across runs and
//! thread counts.

pub mod algebra;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod recognize;
pub mod reconstruct;

pub use geometry::Geometry;
pub use graph::Graph;



