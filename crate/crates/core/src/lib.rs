//! Simulation engine for a g-padded Rydberg chain with nearest-neighbour
//! blockade and its U(1) quantum-link image.
//!
//! The crate is organised bottom-up:
//!
//! * [`basis`] enumerates and indexes the blockaded Hilbert space.
//! * [`lgtmap`] maps bitstrings to electric strings and charge clusters.
//! * [`operator`] holds the compressed sparse matrix type.
//! * [`hamiltonians`] builds every model operator on a basis.
//! * [`combinatorics`] and [`fragments`] count and discover Krylov fragments.
//! * [`dynamics`] propagates quenches and simulates measurement.
//! * [`sliomstats`] computes exact SLIOM distributions and their widths.

pub mod basis;
pub mod combinatorics;
pub mod dynamics;
pub mod error;
pub mod fragments;
pub mod hamiltonians;
pub mod lgtmap;
pub mod operator;
pub mod sliomstats;

pub use basis::{pad, Basis, BasisKind, BitConfig, ChainSpec};
pub use error::{FraglabError, Result};
pub use lgtmap::{decompose, sliom_pattern, Cluster, ClusterDecomposition, SliomPattern};
pub use operator::SparseOperator;

/// Engine version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
