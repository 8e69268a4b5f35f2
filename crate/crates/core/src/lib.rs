//! Grid-based 1D quantum wave-packet dynamics on simulated quantum circuits.
//!
//! The library discretizes a wave function on `M = 2^n` grid points, encodes it
//! on an `n`-qubit register (little-endian: qubit 0 is the least significant
//! index bit), and propagates it with first-order split-operator steps compiled
//! to quantum circuits:
//!
//! * the potential phase `exp(-i V dt)` becomes Pauli-Z string exponentials
//!   (CNOT ladder + RZ), exact because all Z-strings commute;
//! * the kinetic phase is applied in the momentum basis, entered and left via
//!   quantum Fourier transform circuits.
//!
//! Circuits run on a built-in statevector simulator and are cross-checked
//! against two independent classical backends (dense Trotter matrices and an
//! FFT split-operator propagator). A small transpiler lowers circuits to a
//! `{CZ, RZ, SX, X}` basis on a linear coupling chain for depth metrics.

pub mod circuit;
pub mod dense;
pub mod error;
mod fmt;
pub mod grid;
pub mod pauli;
pub mod propagator;
pub mod report;
pub mod scenario;
pub mod sim;
pub mod transpile;

pub use error::{Error, Result};

/// One atomic mass unit in electron masses.
pub const AMU_TO_ME: f64 = 1822.888486;
