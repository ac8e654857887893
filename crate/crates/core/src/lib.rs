//! Spanning trees in random `r`-regular `s`-uniform hypergraphs.
//!
//! The crate is organised around the configuration (pairing) model:
//!
//! * [`params`], [`config`], [`hypergraph`] and [`cycles`] hold the data model,
//!   the uniform sampler, simplicity/connectivity tests, the spanning-tree
//!   census and the short-cycle census.
//! * [`exact`] evaluates every closed-form count and moment with big rationals,
//!   alongside brute-force enumeration oracles.
//! * [`asymptotics`] covers the cycle parameters `λ_j`, `ζ_j`, the
//!   generating-function machinery behind the joint moments, the variance sum
//!   and the limiting variable `W`.
//! * [`threshold`] is the growth-rate function `L(r, s)` and its root `ρ(s)`.
//! * [`laplace`] is the second-moment variational problem over the triangle `K`.
//! * [`mc`] drives seeded Monte Carlo experiments, and [`verify`] bundles the
//!   acceptance checks used by both the test suite and the CLI.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise.
// `!(x > a)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod config;
pub mod cycles;
pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod laplace;
pub mod mc;
pub mod par;
pub mod params;
pub mod rng;
pub mod threshold;
pub mod verify;

pub use config::{Configuration, Point};
pub use cycles::CycleCensus;
pub use error::{Error, Result};
pub use exact::ExactQ;
pub use hypergraph::Hypergraph;
pub use par::Execution;
pub use params::ModelParams;

/// Default cap on backtracking steps for spanning-tree and enumeration searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Seed used when none is given, so that default runs are reproducible.
pub const DEFAULT_SEED: u64 = 20_240_601;
