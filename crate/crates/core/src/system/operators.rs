use alloc::vec::Vec;

use super::basis::BasisIndex;
use super::matrix::{Matrix2, Matrix4};
use super::params::SystemParams;

use BasisIndex::{Ground, Photon, Qubit1, Qubit2};

/// How a [`CollapseOperator`] enters the master equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DissipatorKind {
    /// `rate·(LρL† − ½{L†L, ρ})`
    Lowering,
    /// `(rate/2)·(LρL − ρ)` for a self-adjoint involution `L = σᶻ`.
    Dephasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseOperator {
    pub operator: Matrix4,
    pub rate: f64,
    pub kind: DissipatorKind,
    pub label: &'static str,
}

impl CollapseOperator {
    /// Contribution of this channel to `dρ/dt`.
    pub fn dissipator(&self, rho: &Matrix4) -> Matrix4 {
        let l = &self.operator;
        match self.kind {
            DissipatorKind::Lowering => {
                let l_dag = l.adjoint();
                let jump = *l * *rho * l_dag;
                let decay = (l_dag * *l).anticommutator(rho).scale_real(0.5);
                (jump - decay).scale_real(self.rate)
            }
            DissipatorKind::Dephasing => (*l * *rho * *l - *rho).scale_real(0.5 * self.rate),
        }
    }
}

fn coupling(a: BasisIndex, b: BasisIndex, g: f64) -> Matrix4 {
    let (i, j) = (a.slot(), b.slot());
    (Matrix4::unit(i, j) + Matrix4::unit(j, i)).scale_real(g)
}

/// Resonant exchange Hamiltonian `g₁(aσ₁⁺ + a†σ₁⁻) + g₂(aσ₂⁺ + a†σ₂⁻)`
/// restricted to the 4-basis.
pub fn hamiltonian(params: &SystemParams) -> Matrix4 {
    exchange_hamiltonian(params.g1(), params.g2())
}

/// Same as [`hamiltonian`] from raw couplings; zero couplings are allowed
/// here since nothing downstream divides by them.
pub fn exchange_hamiltonian(g1: f64, g2: f64) -> Matrix4 {
    coupling(Qubit1, Photon, g1) + coupling(Photon, Qubit2, g2)
}

/// `σ₁ᶻ = diag(−1, +1, −1, −1)`
pub fn sigma_z_qubit1() -> Matrix4 {
    embed_qubit1_op(&Matrix2::pauli_z())
}

/// `σ₂ᶻ = diag(−1, −1, −1, +1)`
pub fn sigma_z_qubit2() -> Matrix4 {
    embed_qubit2_op(&Matrix2::pauli_z())
}

/// Jump operators with non-zero rates: resonator loss `a = |1⟩⟨3|`, qubit
/// emission `σ₁⁻ = |1⟩⟨2|`, `σ₂⁻ = |1⟩⟨4|`, and both qubits' `σᶻ` when
/// `Γ_φ > 0`.
pub fn collapse_operators(params: &SystemParams) -> Vec<CollapseOperator> {
    let lowering = |from: BasisIndex, rate, label| CollapseOperator {
        operator: Matrix4::unit(Ground.slot(), from.slot()),
        rate,
        kind: DissipatorKind::Lowering,
        label,
    };
    let dephasing = |operator, label| CollapseOperator {
        operator,
        rate: params.gamma_phi(),
        kind: DissipatorKind::Dephasing,
        label,
    };
    [
        lowering(Photon, params.kappa(), "a"),
        lowering(Qubit1, params.gamma1(), "sigma1-"),
        lowering(Qubit2, params.gamma2(), "sigma2-"),
        dephasing(sigma_z_qubit1(), "sigma1z"),
        dephasing(sigma_z_qubit2(), "sigma2z"),
    ]
    .into_iter()
    .filter(|op| op.rate > 0.0)
    .collect()
}

/// Lifts a qubit-2 operator into the 4-basis. `|1⟩,|2⟩,|3⟩` carry qubit 2 in
/// `|0⟩` and `|4⟩` carries it in `|1⟩`; only the `|1⟩ ↔ |4⟩` off-diagonal
/// survives because every other transition would change qubit 1 or the
/// photon number.
pub fn embed_qubit2_op(op: &Matrix2) -> Matrix4 {
    embed(op, Qubit2)
}

/// Lifts a qubit-1 operator into the 4-basis; the excited slot is `|2⟩`.
pub fn embed_qubit1_op(op: &Matrix2) -> Matrix4 {
    embed(op, Qubit1)
}

fn embed(op: &Matrix2, excited: BasisIndex) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for b in BasisIndex::ALL {
        let d = if b == excited { op[(1, 1)] } else { op[(0, 0)] };
        m[(b.slot(), b.slot())] = d;
    }
    let (g, e) = (Ground.slot(), excited.slot());
    m[(g, e)] = op[(0, 1)];
    m[(e, g)] = op[(1, 0)];
    m
}
