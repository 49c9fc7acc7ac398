//! Basis, matrix primitives, system parameters and the operators every other
//! module builds on.

mod basis;
mod matrix;
mod operators;
mod params;
mod qubit;
mod state;

pub use basis::BasisIndex;
pub use matrix::{Matrix2, Matrix4, C64};
#[allow(unused_imports)]
pub(crate) use matrix::{I, ONE, ZERO};
pub use operators::{
    collapse_operators, embed_qubit1_op, embed_qubit2_op, exchange_hamiltonian, hamiltonian, sigma_z_qubit1,
    sigma_z_qubit2, CollapseOperator, DissipatorKind,
};
pub use params::SystemParams;
pub use qubit::QubitAmplitudes;
pub use state::{DensityMatrix, Physicality, PureState4};
