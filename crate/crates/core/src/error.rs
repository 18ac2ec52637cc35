use thiserror::Error;

/// Failures from building or solving the driven-atom model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The evolution matrix is rank deficient, so the stationary state is not
    /// unique. Carries the numerically detected null-space dimension.
    #[error("evolution matrix is singular (null-space dimension {nullity}); stationary state is not unique")]
    SingularSystem { nullity: usize },

    #[error("closed-form steady state needs at least one nonzero Rabi frequency")]
    DegenerateDrive,

    #[error("integration step too large: dt * |M| = {ratio:.3} exceeds 1")]
    StepTooLarge { ratio: f64 },

    #[error("invalid integration request: {0}")]
    InvalidStep(String),

    #[error("resolvent is singular at omega = {omega}")]
    SingularResolvent { omega: f64 },

    #[error("dressed-state analysis is restricted to zero detuning (delta = {delta})")]
    RequiresResonance { delta: f64 },

    #[error("dressed states are degenerate for omega_a = 0")]
    DegenerateDressing,

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
