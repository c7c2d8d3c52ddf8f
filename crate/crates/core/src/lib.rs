//! Quasi-exactly solvable one-dimensional potentials built from a rational
//! generating function `W+`, with exact construction, level-index
//! prediction, analytic eigenfunctions and a numerical cross-check.

pub mod builtin;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod ratfun;
pub mod spectral;
pub mod susy;
pub mod wavefun;

pub use builtin::Builtin;
pub use error::{QesError, Result};
pub use oracle::{
    eigenvalues, eigenvector, plan_grid, verify_prediction, DiscretizationPlan, OracleConfig,
    SpectrumReport, Verdict,
};
pub use ratfun::{Polynomial, Rational, RationalFunction, RootLocation};
pub use spectral::{
    classify_generator, predict_levels, verify_nonsingular, Certainty, GeneratorProfile,
    LevelPrediction,
};
pub use susy::{
    build_model, infer_epsilon, phi_to_wplus, potentials_from_superpotential, scale_generator,
    superpotentials_from_generator, QesModel, SuperpotentialPair,
};
pub use wavefun::{build_wave_spec, count_nodes, eval_wave, Level, WaveSpec};
