//! Partial measurement `M₀ = |0⟩⟨0| + √(1−p)|1⟩⟨1|`, `M₁ = √p|1⟩⟨1|`, its
//! reversal `X·M₀(q)·X / √(1−q)`, and their post-selected action on the
//! composite state.
//!
//! Only the no-tunnel branch (`M₀`) transforms states; the tunnel branch is
//! discarded and shows up solely as the missing success probability.

use crate::error::{Error, Result};
use crate::math;
use crate::system::{
    embed_qubit1_op, embed_qubit2_op, sigma_z_qubit2, DensityMatrix, Matrix2, Matrix4, PureState4,
};

const MIN_BRANCH_PROBABILITY: f64 = 1e-15;

/// Strength `p` (or `q`) of a partial measurement, in `[0, 1]`.
///
/// Stored through its complement `1 − p` so that strengths extremely close
/// to 1, such as the reversal strength `1 − (1−p)e^{−st}` at large `st`,
/// keep full relative precision in `1 − p`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MeasurementStrength {
    complement: f64,
}

impl MeasurementStrength {
    pub const ZERO: MeasurementStrength = MeasurementStrength { complement: 1.0 };

    pub fn new(strength: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&strength) {
            return Err(Error::InvalidParameter {
                name: "measurement strength",
                value: strength,
                expected: "a strength in [0, 1]",
            });
        }
        Ok(MeasurementStrength {
            complement: 1.0 - strength,
        })
    }

    /// From `1 − strength`.
    pub fn from_complement(complement: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&complement) {
            return Err(Error::InvalidParameter {
                name: "measurement strength complement",
                value: complement,
                expected: "a complement in [0, 1]",
            });
        }
        Ok(MeasurementStrength { complement })
    }

    /// Like [`new`](Self::new) but additionally rejects the projective
    /// limit, which cannot be undone.
    pub fn reversible(strength: f64) -> Result<Self> {
        let s = Self::new(strength)?;
        if s.is_reversible() {
            Ok(s)
        } else {
            Err(Error::InvalidParameter {
                name: "measurement strength",
                value: strength,
                expected: "a reversible strength in [0, 1)",
            })
        }
    }

    pub fn value(&self) -> f64 {
        1.0 - self.complement
    }

    pub fn complement(&self) -> f64 {
        self.complement
    }

    pub fn is_reversible(&self) -> bool {
        self.complement > 0.0
    }
}

/// A partial measurement of fixed strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialMeasurement {
    pub strength: MeasurementStrength,
}

impl PartialMeasurement {
    pub fn new(strength: MeasurementStrength) -> Self {
        PartialMeasurement { strength }
    }

    /// No-tunnel Kraus operator `M₀`.
    pub fn no_tunnel(&self) -> Matrix2 {
        Matrix2::real_diagonal(1.0, math::sqrt(self.strength.complement()))
    }

    /// Tunnel Kraus operator `M₁`.
    pub fn tunnel(&self) -> Matrix2 {
        Matrix2::real_diagonal(0.0, math::sqrt(self.strength.value()))
    }

    /// `X·M₀·X`, the physical operation a reversal is built from.
    pub fn flipped_no_tunnel(&self) -> Matrix2 {
        let x = Matrix2::pauli_x();
        x * self.no_tunnel() * x
    }
}

/// `diag(1, √(1−p))`
pub fn m0_operator(p: MeasurementStrength) -> Matrix2 {
    PartialMeasurement::new(p).no_tunnel()
}

/// `diag(0, √p)`
pub fn m1_operator(p: MeasurementStrength) -> Matrix2 {
    PartialMeasurement::new(p).tunnel()
}

/// `M₀⁻¹ = X·M₀(q)·X / √(1−q) = diag(1, 1/√(1−q))`, assembled from the
/// bit-flip / measurement / bit-flip sequence.
pub fn reversal_operator(q: MeasurementStrength) -> Result<Matrix2> {
    if !q.is_reversible() {
        return Err(Error::DegenerateReversal);
    }
    let flipped = PartialMeasurement::new(q).flipped_no_tunnel();
    Ok(flipped.scale_real(1.0 / math::sqrt(q.complement())))
}

/// A state conditioned on a measurement record, with the probability of that
/// record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSelectedState {
    pub state: DensityMatrix,
    pub success_probability: f64,
}

fn post_select(kraus: &Matrix4, rho: &Matrix4, min_probability: f64) -> Result<PostSelectedState> {
    let unnormalized = *kraus * *rho * kraus.adjoint();
    let probability = unnormalized.trace().re;
    if !(probability >= min_probability) {
        return Err(Error::ZeroProbability { probability });
    }
    let state = unnormalized.scale_real(1.0 / probability).hermitian_part();
    Ok(PostSelectedState {
        state: DensityMatrix::unchecked(state),
        // a contraction cannot raise the trace; anything above 1 is rounding
        success_probability: probability.min(1.0),
    })
}

/// No-tunnel outcome of a strength-`p` partial measurement on qubit 1.
pub fn apply_measurement_qubit1(
    state: &DensityMatrix,
    p: MeasurementStrength,
) -> Result<PostSelectedState> {
    let kraus = embed_qubit1_op(&m0_operator(reversible(p)?));
    post_select(&kraus, state.matrix(), MIN_BRANCH_PROBABILITY)
}

/// Pure-state form of [`apply_measurement_qubit1`]; returns the normalized
/// state and the branch probability.
pub fn measure_pure_qubit1(
    state: &PureState4,
    p: MeasurementStrength,
) -> Result<(PureState4, f64)> {
    let kraus = embed_qubit1_op(&m0_operator(reversible(p)?));
    let out = PureState4::unchecked(kraus.apply(state.amplitudes()));
    let probability = out.norm_sqr();
    if probability < MIN_BRANCH_PROBABILITY {
        return Err(Error::ZeroProbability { probability });
    }
    Ok((out.normalized()?, probability))
}

/// Reversal of strength `q` on qubit 2 followed by the `σ₂ᶻ` phase fix.
///
/// The success probability is the trace of the unnormalized result,
/// `1 − q + q·ρ₄₄`.
pub fn apply_reversal_qubit2(
    state: &DensityMatrix,
    q: MeasurementStrength,
) -> Result<PostSelectedState> {
    apply_reversal_qubit2_with(state, q, true)
}

/// [`apply_reversal_qubit2`] with the `σ₂ᶻ` correction optional.
pub fn apply_reversal_qubit2_with(
    state: &DensityMatrix,
    q: MeasurementStrength,
    sigma_z: bool,
) -> Result<PostSelectedState> {
    if !q.is_reversible() {
        return Err(Error::DegenerateReversal);
    }
    let mut kraus = embed_qubit2_op(&PartialMeasurement::new(q).flipped_no_tunnel());
    if sigma_z {
        kraus = sigma_z_qubit2() * kraus;
    }
    // the reversal branch shrinks like e^{−st}; only a vanishing trace is fatal
    post_select(&kraus, state.matrix(), f64::MIN_POSITIVE)
}

fn reversible(p: MeasurementStrength) -> Result<MeasurementStrength> {
    if p.is_reversible() {
        Ok(p)
    } else {
        Err(Error::InvalidParameter {
            name: "p",
            value: p.value(),
            expected: "a strength in [0, 1)",
        })
    }
}
