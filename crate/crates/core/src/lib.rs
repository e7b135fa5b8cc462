//! Simulation core for the stochastic-gravitation picture of quantum
//! phenomena: a random background of weak gravitational plane waves drives
//! the relative oscillation of test-particle pairs, whose accumulated phase
//! acts as a hidden variable for two-slit dephasing and Bell correlations.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and threaded execution live in the `stochgrav` crate.

#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod background;
pub mod bell;
pub mod deviation;
pub mod error;
pub mod exec;
pub mod hilbert;
pub mod interference;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
