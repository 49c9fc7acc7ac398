use crate::error::{Error, Result};
use crate::math;

use super::basis::BasisIndex;
use super::matrix::{Matrix4, C64, ZERO};

/// Hermiticity tolerance of a [`DensityMatrix`].
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Unit-trace tolerance of a [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-9;
/// Lowest eigenvalue a [`DensityMatrix`] may have.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Possibly sub-normalized pure state over the 4-basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState4([C64; 4]);

impl PureState4 {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let state = PureState4(amplitudes);
        let norm = state.norm_sqr();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter {
                name: "state norm",
                value: math::sqrt(norm),
                expected: "a norm <= 1",
            });
        }
        Ok(state)
    }

    /// Builds a state without the norm check; used for the unnormalized
    /// intermediates of the no-jump chain.
    pub(crate) const fn unchecked(amplitudes: [C64; 4]) -> Self {
        PureState4(amplitudes)
    }

    pub fn basis(index: BasisIndex) -> Self {
        let mut a = [ZERO; 4];
        a[index.slot()] = C64::new(1.0, 0.0);
        PureState4(a)
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }

    pub fn amplitude(&self, index: BasisIndex) -> C64 {
        self.0[index.slot()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(C64::norm_sqr).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < 1e-300 {
            return Err(Error::ZeroProbability { probability: n2 });
        }
        let inv = 1.0 / math::sqrt(n2);
        Ok(PureState4(self.0.map(|z| z * inv)))
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState4) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|ψ⟩⟨ψ|`
    pub fn outer(&self) -> Matrix4 {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = self.0[i] * self.0[j].conj();
            }
        }
        m
    }
}

/// Measured departure of a matrix from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn of(m: &Matrix4) -> Self {
        let tr = m.trace();
        Physicality {
            hermiticity_error: m.hermiticity_error(),
            trace_error: math::hypot(tr.re - 1.0, tr.im),
            min_eigenvalue: m.hermitian_eigenvalues()[0],
        }
    }

    pub fn within(&self, hermiticity: f64, trace: f64, positivity: f64) -> bool {
        self.hermiticity_error <= hermiticity
            && self.trace_error <= trace
            && self.min_eigenvalue >= -positivity
    }
}

/// Normalized density matrix over the 4-basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix4);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix4) -> Result<Self> {
        let report = Physicality::of(&m);
        if report.within(HERMITICITY_TOL, TRACE_TOL, POSITIVITY_TOL) {
            Ok(DensityMatrix(m))
        } else {
            Err(Error::NotPhysical {
                hermiticity_error: report.hermiticity_error,
                trace_error: report.trace_error,
                min_eigenvalue: report.min_eigenvalue,
            })
        }
    }

    pub(crate) const fn unchecked(m: Matrix4) -> Self {
        DensityMatrix(m)
    }

    /// `|ψ⟩⟨ψ|` for a unit-norm `ψ`.
    pub fn from_pure(state: &PureState4) -> Result<Self> {
        let n2 = state.norm_sqr();
        if math::abs(n2 - 1.0) > TRACE_TOL {
            return Err(Error::InvalidParameter {
                name: "state norm",
                value: math::sqrt(n2),
                expected: "a unit-norm pure state",
            });
        }
        Ok(DensityMatrix(state.outer()))
    }

    pub fn ground() -> Self {
        DensityMatrix(Matrix4::unit(0, 0))
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4 {
        self.0
    }

    pub fn entry(&self, row: BasisIndex, col: BasisIndex) -> C64 {
        self.0[(row.slot(), col.slot())]
    }

    pub fn population(&self, index: BasisIndex) -> f64 {
        self.entry(index, index).re
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// `⟨φ|ρ|φ⟩` for a unit-norm target.
    pub fn expectation(&self, target: &PureState4) -> f64 {
        let rho_phi = self.0.apply(target.amplitudes());
        target
            .amplitudes()
            .iter()
            .zip(rho_phi)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }

    pub fn physicality(&self) -> Physicality {
        Physicality::of(&self.0)
    }
}
