//! Fourier-space laboratory for the thermoelastic Bresse beam of
//! Types I and III: exact mode propagation, energy and Lyapunov
//! functional certification, decay envelopes, and Sobolev-norm decay
//! rates with the regularity-loss dichotomy.

// `!(a > b)` guards reject NaN; `a <= b` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// parameter structs are built by tweaking a default; that reads better
// than a 13-field struct literal
#![allow(clippy::field_reassign_with_default)]

pub mod envelope;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod rates;
pub mod reconstruct;
pub mod sampling;
pub mod spectral;

pub use envelope::{bound_check, fit_envelope, s1, s2, EnvelopeFit};
pub use error::{BresseError, Result};
pub use functionals::{
    check_dissipation_identity, check_lemma_inequality, check_proposition, dissipation,
    eval_functional, mode_energy, FunctionalId, LyapunovConfig, PropositionReport, ResidualReport,
};
pub use grid::FrequencyGrid;
pub use model::{classify_speeds, validate, Parameters, SpeedClass, SystemKind};
pub use rates::{fit_log_slope, rate_report, theorem_rate_prediction, RateExperiment, RateReport};
pub use reconstruct::{
    initial_mode_state, sobolev_norm, vector_solution_components, InitialProfile, NormReport,
    ProfileShape, StateSlot,
};
pub use spectral::{
    build_generator, evolve_trajectory, propagate, spectral_abscissa, Generator, ModeState,
    Propagator, Trajectory,
};
