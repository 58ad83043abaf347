//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by parameter validation and the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// A decay rate, efficiency, or duration is negative (or out of range).
    #[error("negative or out-of-range rate: {0}")]
    NegativeRate(String),

    /// γ_1D + γ_c + γ_i differs from 1 by more than 1e-12.
    #[error("decay rates must sum to gamma = 1, got {0}")]
    RateSumMismatch(f64),

    /// The dressed-state splitting cannot be tuned to the qubit frequency
    /// because 2V > omega_q.
    #[error("resonance 2V = omega_q infeasible: 2V = {two_v} > omega_q = {omega_q}")]
    ResonanceInfeasible { two_v: f64, omega_q: f64 },

    /// Both V and delta_0 vanish, so the dressed basis is undefined.
    #[error("degenerate splitting: V and delta_0 are both zero")]
    DegenerateSplitting,

    /// 4×4 inversion hit a determinant below the scale-invariant threshold.
    #[error("singular matrix: |det| = {det} below threshold {threshold}")]
    SingularMatrix { det: f64, threshold: f64 },

    /// Argument outside the domain of a closed-form expression.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Adaptive integration drove the step size below the representable
    /// minimum without meeting the local error tolerance.
    #[error("integration failure: step underflow at t = {t}")]
    IntegrationFailure { t: f64 },

    /// Relaxation residual failed to reach the requested tolerance.
    #[error("relaxation did not converge: residual {residual} after {iterations} sweeps")]
    NonConvergence { residual: f64, iterations: usize },

    /// Grid spacing too coarse for the requested geometry.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
