use thiserror::Error;

/// Errors surfaced by the simulation and certification pipeline.
#[derive(Debug, Error)]
pub enum BresseError {
    /// A physical coefficient is zero, negative, or non-finite.
    #[error("coefficient `{0}` must be strictly positive and finite")]
    NonPositiveCoefficient(&'static str),

    /// Propagation produced an overflow or NaN.
    #[error("propagation produced a non-finite state (xi = {xi}, t = {t})")]
    NonFiniteResult { xi: f64, t: f64 },

    /// The eigenvalue solver did not produce a usable decomposition.
    #[error("eigenvalue computation failed for the {0}x{0} generator")]
    EigenFailure(usize),

    /// A functional was requested on a state of the wrong system kind.
    #[error("functional `{functional}` is not defined for {kind}")]
    WrongKind {
        functional: &'static str,
        kind: &'static str,
    },

    /// An unknown lemma identifier was passed to the inequality checker.
    #[error("unknown lemma `{0}` for this kind/speed class")]
    UnknownLemma(String),

    /// Envelope fitting found no positive decay rate.
    #[error("no exponential envelope fits the trajectory set (largest feasible beta = {0:.3e})")]
    NoDecay(f64),

    /// Not enough samples inside the requested fit window.
    #[error("fit window [{0:.3e}, {1:.3e}] contains {2} samples; need at least {3}")]
    InsufficientSamples(f64, f64, usize, usize),

    /// A norm that must be positive vanished or went negative.
    #[error("norm series contains a non-positive value at t = {0:.6e}")]
    NonPositiveNorm(f64),

    /// The high-frequency tail of a norm integral exceeds the tolerance.
    #[error("high-frequency tail estimate {tail:.3e} exceeds {limit:.3e} of the integral; widen the grid")]
    TailTooFat { tail: f64, limit: f64 },

    /// A profile was assigned to a state slot the kind does not have.
    #[error("profile slot `{slot}` does not exist for {kind}")]
    BadAssignment {
        slot: &'static str,
        kind: &'static str,
    },

    /// A grid failed its construction invariants.
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    /// A trajectory or input list violated a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, BresseError>;
