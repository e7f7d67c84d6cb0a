//! Thermal entanglement witnesses for small antiferromagnetic spin clusters.
//!
//! The crate diagonalizes Heisenberg clusters (dimers, trimers, tetrahedra,
//! the open J–αJ–J tetramer and an anisotropic spin-1 dimer), builds their
//! thermal states and evaluates three entanglement witnesses: the internal
//! energy against the minimum separable energy, pairwise concurrence, and the
//! summed magnetic susceptibility. It also computes the magnetization /
//! susceptibility complementarity pair (P, Q).
//!
//! Units: k_B = 1. Pass `J/k_B` in Kelvin as the energy scale and every
//! temperature is in Kelvin; pass `J = 1` and temperatures are in units of J.

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod spectra;
pub mod spin_model;
pub mod thermo;
pub mod witness;

pub use error::{Error, Result};
