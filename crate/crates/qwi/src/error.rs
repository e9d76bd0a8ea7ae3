use thiserror::Error;

/// Errors shared across the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    /// The impedance has a pole at the evaluation plane (wave-function node).
    /// Poles are legitimate physics; callers may record and continue.
    #[error("impedance pole: state-vector denominator vanished (|denominator| = {magnitude:.3e})")]
    DegenerateState { magnitude: f64 },

    /// The sign-sum engine enumerates 2^N terms and refuses profiles beyond
    /// its limit; the iterative engine handles any N.
    #[error("profile has {regions} regions, above the sign-sum engine limit of {max}; use the iterative engine")]
    ProfileTooLarge { regions: usize, max: usize },

    /// Transmission is undefined when a lead does not propagate at E.
    #[error("lead is evanescent at E = {energy}: transmission is undefined there")]
    EvanescentLead { energy: f64 },

    /// Bound states require E below both lead potentials.
    #[error("lead is propagating at E = {energy}: not in the bound-state range")]
    PropagatingLead { energy: f64 },

    /// Region construction with a non-positive or non-finite width.
    #[error("region width must be a positive finite number, got {width}")]
    InvalidRegion { width: f64 },

    /// Energy grid construction with an empty or inverted range.
    #[error("invalid energy grid: {reason}")]
    InvalidGrid { reason: String },
}
