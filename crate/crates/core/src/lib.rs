//! Simulation core for measurement-assisted quantum state transfer between
//! two qubits coupled through a lossy resonator.
//!
//! The state lives in the four-dimensional zero-plus-one-excitation subspace
//! (see [`BasisIndex`]). The crate provides the closed-form evolution for
//! equal decay rates ([`analytic`]), a general Lindblad integrator
//! ([`lindblad`]), the partial measurement and its reversal
//! ([`measurement`]), the end-to-end protocol ([`protocol`]) and the
//! parameter sweeps over time, decay and dephasing ([`sweeps`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod analytic;
pub mod lindblad;
pub mod measurement;
pub mod protocol;
pub mod search;
pub mod sweeps;
pub mod system;

pub use error::{Error, Result};
pub use system::{
    BasisIndex, CollapseOperator, DensityMatrix, DissipatorKind, Matrix2, Matrix4, Physicality,
    PureState4, QubitAmplitudes, SystemParams, C64,
};
