//! Grover minimization for the group-orbit-representative problem.
//!
//! Everything needed to run the search end to end: groups and orbits, a
//! dense state-vector engine with timed noise, circuit builders, the Gmin and
//! AEM drivers, a closed-form Monte-Carlo backend, rate-parameter fitting and
//! the symmetry-block demo that consumes orbit representatives.

pub mod error;
pub mod gate;
pub mod groups;
pub mod layout;
pub mod noise;
pub mod rng;
pub mod aem;
pub mod analysis;
pub mod batch;
pub mod circuits;
pub mod classical_mc;
pub mod device;
pub mod grover;
pub mod schedule;
pub mod state;
pub mod symmetry;

pub use error::{Error, Result};
