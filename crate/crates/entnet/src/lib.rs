//! Entanglement distribution on networks.
//!
//! The crate simulates how two-qubit entanglement spreads through large
//! networks of imperfect links: exact single-link algebra, recursion maps for
//! hierarchical repeater schemes, percolation-based distribution protocols on
//! lattices and random graphs, matching-based error correction on the torus,
//! and path routing with purification.
//!
//! Modules:
//! - [`state`]: pure / Werner / bit-phase link algebra plus a density-matrix
//!   oracle used to cross-check every closed form.
//! - [`maps`]: one-dimensional recursion maps and their critical parameters.
//! - [`net`]: lattice and random-graph construction, rewiring transforms,
//!   shortest paths, serialization.
//! - [`perc`]: bond/site percolation engine and the entanglement-percolation
//!   protocols built on it.
//! - [`qec`]: error-pattern sampling, syndrome extraction, exact
//!   minimum-weight matching, logical-failure statistics.
//! - [`route`]: swap chains, purification-assisted routing, advantage
//!   regions, teleportation fidelity.
//! - [`mc`]: the reproducible Monte Carlo harness shared by the above.
//!
//! The `examples/` directory holds one runnable program per capability; they
//! are the intended starting point.

pub mod maps;
pub mod mc;
pub mod net;
pub mod perc;
pub mod qec;
pub mod route;
pub mod state;
