//! Schmidt's game and McMullen's absolute game on concrete metric spaces,
//! together with the horoball-avoidance strategy that forces the outcome to
//! be badly approximable.
//!
//! The crate is organised bottom-up:
//!
//! * [`metric`] – ambient spaces, balls, nesting, diffuseness and uniform
//!   perfectness certificates.
//! * [`tree`] and [`hyperbolic`] – the real-tree and upper half-plane models:
//!   Gromov products, Busemann functions, horoballs and their shadows.
//! * [`games`] – referees for both games, the strategy interface and the
//!   absolute-to-Schmidt, intersection and product constructions.
//! * [`horoballs`] – disjoint horoball families (Ford circles, user files).
//! * [`strategy`] – the avoidance strategy, its constants and the
//!   badly-approximable verifiers.
//! * [`analysis`] – power-law and box-counting dimension checks.
//!
//! Batch workloads go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iteration otherwise.

pub mod analysis;
pub mod games;
pub mod horoballs;
pub mod hyperbolic;
pub mod metric;
pub mod par;
pub mod rational;
pub mod records;
pub mod strategy;
pub mod tree;

pub use num::BigRational;
