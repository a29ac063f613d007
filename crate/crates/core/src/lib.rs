//! Exact symbolic computation for Whittaker modules over the Virasoro algebra.
//!
//! The crate normal-orders elements of the universal enveloping algebra
//! `U(V)`, computes the action of `U(V)` on the universal Whittaker module
//! `M_ψ` and its quotients, solves for Whittaker vectors, and checks the
//! structural results about these modules on finite windows with exact
//! rational arithmetic.

pub mod analysis;
pub mod cli;
pub mod expr;
pub mod partitions;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod virasoro;
pub mod whittaker;
pub mod witt;
