//! Interval structure of the closure of first-order limiting probabilities
//! for sparse random graphs G(n, c/n) and d-uniform hypergraphs
//! G^d(n, c/n^(d-1)).
//!
//! Below the phase transition, the limiting probability of any first-order
//! sentence is a subsum of the convergent series of fragment-shape
//! probabilities p_H = e^{-f} (c e^{-x})^{|H|} / aut(H), where H ranges over
//! unions of unicyclic components. This crate computes that series with
//! exact automorphism counts, certifies where its tail fills a full
//! interval, and derives the decomposition of the closure into finitely
//! many closed subintervals — [0,1] itself once c passes the density c0
//! where the acyclic probability drops to 1/2. A Monte Carlo layer samples
//! the models and checks the analytic predictions end to end.
//!
//! Explore the `examples/` directory for one runnable program per
//! capability; the `limprob` binary exposes the same operations as
//! subcommands.

pub mod cache;
pub mod cli;
pub mod error;
pub mod fragment;
pub mod hyper;
pub mod intervals;
pub mod jsonout;
pub mod limits;
pub mod model;
pub mod montecarlo;
pub mod necklace;
pub mod stats;
pub mod trees;
pub mod unicycle;

pub use error::{Error, Result};
pub use model::{ModelKind, ModelParams};
