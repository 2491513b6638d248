//! Exact computation of the frustration index (line index of balance) of
//! signed graphs.
//!
//! The crate is organised around a small number of modules:
//!
//! * [`sgraph`] holds the signed graph type, colourings, frustration
//!   counting, switching and balance detection.
//! * [`models`] materialises the quadratic and 0/1 linear formulations as
//!   inspectable model instances with LP and QUBO exporters.
//! * [`solver`] is a combinatorial branch-and-bound that computes `L(G)`
//!   exactly, together with bounds and a local-search heuristic.
//! * [`oracle`] is a brute-force enumerator used as ground truth.
//! * [`gen`] contains the seeded random graph generators.
//! * [`cli`] implements the command-line front end.

pub mod cli;
pub mod gen;
pub mod models;
pub mod oracle;
pub mod sgraph;
pub mod solver;

pub use sgraph::{BalanceCertificate, Colouring, Edge, GraphError, ParseError, Sign, SignedGraph};
pub use solver::{FrustrationResult, SolveStatus, SolverOptions, SolverStats};
