use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, Error)]
pub enum SolverError {
    /// Model parameters outside the admissible region.
    #[error("invalid parameter: {0}")]
    ParamError(String),

    /// The square-root argument in the field equation became non-positive,
    /// i.e. the trajectory left the equation's validity region.
    #[error("equation left its domain at u = {u}: radicand = {radicand}")]
    DomainError { u: f64, radicand: f64 },

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature precision failure: requested {requested:e}, achieved {achieved:e}")]
    PrecisionError { requested: f64, achieved: f64 },

    /// The adaptive step size underflowed.
    #[error("step size underflow at x = {x}: h = {h:e}")]
    StepFailure { x: f64, h: f64 },

    /// Doubling the trial slope never produced an overshoot classification.
    #[error("no upper bracket: slope doubling reached {last:e} without an overshoot")]
    NoUpperBracket { last: f64 },

    /// A bisection iterate contradicted the bracket ordering; the horizon or
    /// tolerances are too loose to separate the two behaviours.
    #[error("bracket inconsistency: {0}")]
    BracketInconsistency(String),

    /// A profile with no wall content was requested (e.g. u0 = 0).
    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),

    /// The profile does not extend far enough to form the requested tail-fit
    /// windows.
    #[error("insufficient tail: {0}")]
    InsufficientTail(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
