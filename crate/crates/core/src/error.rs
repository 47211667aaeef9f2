//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// A model parameter is non-finite or outside its supported range.
    #[error("{name} must be a finite non-negative number (got {value})")]
    InvalidParameter { name: &'static str, value: f64 },

    /// Temperatures must be strictly positive.
    #[error("temp must be > 0 (got {value})")]
    InvalidTemperature { value: f64 },

    /// A geometric distance of zero makes the coupling formula blow up.
    #[error("{name} must be nonzero")]
    DivisionByZero { name: &'static str },

    /// omega = gamma = 0 leaves the requested quantity undefined.
    #[error("degenerate model (omega = gamma = 0): {context}")]
    DegenerateModel { context: &'static str },

    /// The vectorized superoperator is too ill-conditioned to invert; the
    /// offending direction is the pair of Gibbs weights (m, n) whose sum is
    /// smallest.
    #[error(
        "thermal superoperator is numerically singular: cond {cond:e} from weight pair ({m},{n})"
    )]
    SingularState { cond: f64, m: usize, n: usize },

    /// det(F) is below threshold, so the 2x2 Fisher block cannot be inverted.
    #[error("parameter pair is unidentifiable: det(F) = {det:e} is below {threshold:e}")]
    UnidentifiablePair { det: f64, threshold: f64 },

    /// A diagonal Fisher element vanished, so the single-parameter bound is
    /// infinite.
    #[error("pair member {index} carries no information (F_kk = {value:e})")]
    UninformativeParameter { index: usize, value: f64 },

    /// A finite-difference step would leave the parameter domain.
    #[error("step {h} pushes {name} out of its domain")]
    StepOutOfDomain { name: &'static str, h: f64 },

    /// Adaptive quadrature exhausted its depth budget.
    #[error("quadrature reached {achieved:e}, requested {requested:e}")]
    QuadratureAccuracy { achieved: f64, requested: f64 },

    /// Stirling cycles require t_hot >= t_cold > 0.
    #[error("invalid cycle: require t_hot >= t_cold > 0 (got t_hot = {t_hot}, t_cold = {t_cold})")]
    InvalidCycle { t_hot: f64, t_cold: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
