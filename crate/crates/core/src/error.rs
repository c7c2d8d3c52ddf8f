use thiserror::Error;

/// Every failure the library can report.
///
/// Variants that carry a `String` hold a human-readable location or value
/// (usually a root printed as `p/q` or as an interval).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QesError {
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,

    #[error("evaluation at a real pole x = {0}")]
    PoleEvaluation(String),

    #[error("not a simple pole: {0}")]
    NotASimplePole(String),

    #[error("invalid rational literal {literal:?}: {reason}")]
    ParseRational { literal: String, reason: String },

    #[error("generating function is identically zero")]
    ZeroGenerator,

    #[error("generating function has no real zero")]
    NoZeros,

    #[error("inconsistent epsilon: {0}")]
    InconsistentEpsilon(String),

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),

    #[error("multiple real zero of the generating function at {0}")]
    DegenerateZero(String),

    #[error("unsupported pole of the generating function: {0}")]
    UnsupportedPole(String),

    #[error("generating function violates the asymptotic sign condition: {0}")]
    NonNormalizable(String),

    #[error(
        "zero/pole counts violate n+ = n- + n0 + m0 + 1 (n+={n_plus}, n-={n_minus}, n0={n_zero}, m0={m_zero})"
    )]
    CountIdentity {
        n_plus: usize,
        n_minus: usize,
        n_zero: usize,
        m_zero: usize,
    },

    #[error("potential V- is singular at {0}")]
    SingularPotential(String),

    #[error("phi' vanishes identically")]
    ConstantPhi,

    #[error("scale factor must be nonzero")]
    ZeroScale,

    #[error("residue mismatch in {level} wavefunction: {detail}")]
    ResidueMismatch { level: String, detail: String },

    #[error("quadrature on [{a}, {b}] missed tolerance {tolerance:e} (estimate {estimate:e})")]
    QuadratureFailure {
        a: f64,
        b: f64,
        tolerance: f64,
        estimate: f64,
    },

    #[error("evaluation grid must be strictly increasing")]
    InvalidGrid,

    #[error("no box half-width in the ladder confines energy {0} (largest tried: {1})")]
    BoxTooSmall(f64, f64),

    #[error("eigenvalue computation failed: {0}")]
    ConvergenceFailure(String),

    #[error("{0} is not within 1e-6 of a discrete eigenvalue")]
    NotAnEigenvalue(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = QesError> = std::result::Result<T, E>;
