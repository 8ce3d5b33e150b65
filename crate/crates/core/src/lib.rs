//! Joint optimization of element positions and receive beamforming weights
//! for a linear movable antenna array.
//!
//! A receiver places `N_A` antennas on a line segment of length `L` (all
//! lengths are expressed in carrier wavelengths) and picks a complex weight
//! per antenna. The goal is to maximize the worst-case beamforming gain over
//! a set of intended directions while keeping the gain toward unintended
//! directions below a threshold, respecting a minimum inter-antenna spacing
//! and a unit bound on the weight norm.
//!
//! The constrained problem is folded into a single unconstrained "brightness"
//! score (gain minus quadratic constraint penalties) and searched with a
//! firefly swarm. Supporting modules provide a brute-force grid oracle for
//! small arrays, a Monte Carlo campaign harness, and file exporters for the
//! command line interface.

pub mod array;
pub mod error;
pub mod export;
pub mod firefly;
pub mod harness;
pub mod oracle;
pub mod problem;

pub use error::{Error, Result};
