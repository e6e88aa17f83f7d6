//! Numerical laboratory for the edge-b analysis of waves near null infinity.
//!
//! The crate is organised by topic:
//!
//! * [`geometry`]: compactified charts near spacelike and future timelike
//!   infinity, edge-b frames and dual metrics, admissibility order fits.
//! * [`hamiltonian`]: principal symbols, Hamiltonian vector fields and their
//!   fiber compactification, linearizations.
//! * [`flow`]: closed-form and integrated null-bicharacteristic flows,
//!   radial-set search and asymptotic classification.
//! * [`multiplier`]: causal character of frame vectors, deformation tensors of
//!   multiplier fields, positivity scans and threshold predicates.
//! * [`wavesolver`]: spherical-mode forward solutions on null grids, weighted
//!   norms and decay fits.
//! * [`normop`]: the reduced normal operator at future timelike infinity and
//!   Mellin transform utilities.
//! * [`cli`]: configuration, experiment runner and result emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod hamiltonian;
pub mod multiplier;
pub mod normop;
pub mod numerics;
pub mod wavesolver;

pub use error::{Error, Result};
