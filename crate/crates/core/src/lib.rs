//! Community detection through modularity, modularity density and symmetric
//! nonnegative matrix factorization.
//!
//! Maximizing modularity `Q` is approximately the same problem as minimizing
//! `||W* - S S^T||_F^2` with `W* = B^-1 A`, and maximizing modularity density
//! `D` is exactly minimizing `||W1 - H H^T||_F^2` with `W1 = sigma I + 2A - B`.
//! For constant null models, minimizing `Q` matches a KL-divergence NMF
//! objective. This crate evaluates all of these quantities, solves the NMF
//! problems with multiplicative updates, generates benchmark networks and runs
//! the numerical experiments that check the relationships.

// `!(x >= 0.0)` style guards are used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod objectives;
pub mod partition;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::Graph;
pub use partition::{scale_membership, MembershipKind, MembershipMatrix, Partition};
