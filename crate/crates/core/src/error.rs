use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical input is outside its allowed range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// A matrix handed in as a density matrix violates one of its invariants.
    NotPhysical {
        hermiticity_error: f64,
        trace_error: f64,
        min_eigenvalue: f64,
    },
    /// Reversal strength q = 1 has no inverse.
    DegenerateReversal,
    /// The post-selected branch has (numerically) zero probability.
    ZeroProbability { probability: f64 },
    /// The adaptive integrator needed a step below its floor.
    StepSizeUnderflow { time: f64, step: f64 },
    /// The closed-form engine was asked for unequal decay rates or dephasing.
    AnalyticUnavailable,
    /// The reversal formula needs one common decay rate.
    FormulaUnavailable,
    /// The no-jump oracle only holds at the first full-transfer time.
    NotTransferTime { time: f64, expected: f64 },
    /// A sample grid or sample-time list is malformed.
    InvalidGrid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                expected,
            } => write!(f, "invalid {name} = {value}: expected {expected}"),
            Error::NotPhysical {
                hermiticity_error,
                trace_error,
                min_eigenvalue,
            } => write!(
                f,
                "not a density matrix (hermiticity error {hermiticity_error:e}, \
                 trace error {trace_error:e}, smallest eigenvalue {min_eigenvalue:e})"
            ),
            Error::DegenerateReversal => write!(f, "reversal strength q = 1 cannot be inverted"),
            Error::ZeroProbability { probability } => {
                write!(f, "post-selected branch has probability {probability:e}")
            }
            Error::StepSizeUnderflow { time, step } => {
                write!(f, "step size underflow at t = {time} (step {step:e})")
            }
            Error::AnalyticUnavailable => write!(
                f,
                "closed-form evolution needs kappa = gamma1 = gamma2 and gamma_phi = 0"
            ),
            Error::FormulaUnavailable => write!(
                f,
                "reversal formula needs kappa = gamma1 = gamma2; use a fixed or optimal q"
            ),
            Error::NotTransferTime { time, expected } => write!(
                f,
                "no-jump oracle requires t = pi/(sqrt(2) g) = {expected}, got {time}"
            ),
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
        }
    }
}

impl core::error::Error for Error {}
