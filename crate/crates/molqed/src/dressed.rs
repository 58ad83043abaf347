//! Dressed basis of the dipole-coupled molecule pair.
//!
//! The dipole-dipole interaction hybridizes the singly excited states
//! |e₁g₂⟩, |g₁e₂⟩ into
//!
//! ```text
//! |S⟩ = β₁|e₁g₂⟩ + β₂|g₁e₂⟩,      |A⟩ = β₁′|e₁g₂⟩ − β₂′|g₁e₂⟩,
//! ```
//!
//! split by 2𝒱 = sqrt(4V² + δ₀²). The qubit's charge oscillation couples
//! |S,−⟩ ↔ |A,+⟩ with strength 𝒢 = (g_c1 − g_c2) V / sqrt(4V² + δ₀²), which
//! drives the Raman transfer; 𝒢₁ and 𝒢₂ are the same-manifold couplings.

use crate::error::{Result, SimError};
use crate::params::HybridParams;

/// Hybridization coefficients and derived couplings/decay rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedBasis {
    /// Coefficient β₁ of |e₁g₂⟩ in |S⟩.
    pub beta1: f64,
    /// Coefficient β₂ of |g₁e₂⟩ in |S⟩.
    pub beta2: f64,
    /// Coefficient β₁′ of |e₁g₂⟩ in |A⟩.
    pub beta1p: f64,
    /// Coefficient β₂′ of |g₁e₂⟩ in |A⟩ (entering with a minus sign).
    pub beta2p: f64,
    /// Dressed-state splitting 2𝒱 = sqrt(4V² + δ₀²).
    pub splitting: f64,
    /// Raman coupling 𝒢 between |S,−⟩ and |A,+⟩.
    pub g_eff: f64,
    /// Same-manifold coupling 𝒢₁ (within |S,±⟩).
    pub g1_eff: f64,
    /// Same-manifold coupling 𝒢₂ (within |A,±⟩).
    pub g2_eff: f64,
    /// Decay rate Γ_s of |S⟩.
    pub gamma_s: f64,
    /// Decay rate Γ_a of |A⟩.
    pub gamma_a: f64,
    /// Cross-decay rate Γ_as between the dressed states.
    pub gamma_as: f64,
}

/// Populates the dressed basis from validated parameters.
///
/// Fails with [`SimError::DegenerateSplitting`] when both V and δ₀ vanish;
/// the Raman scheme is undefined there, so this is an error rather than a
/// silent limit.
pub fn build_dressed(p: &HybridParams) -> Result<DressedBasis> {
    let v = p.v_dd;
    let d0 = p.delta_0;
    let split = (4.0 * v * v + d0 * d0).sqrt();
    if split == 0.0 {
        return Err(SimError::DegenerateSplitting);
    }
    let c = d0 / split; // = beta1^2 - beta2^2
    let beta1 = (0.5 * (1.0 + c)).sqrt();
    let beta2 = (0.5 * (1.0 - c)).sqrt();
    let gamma = p.gamma();
    let vr = v / split;
    Ok(DressedBasis {
        beta1,
        beta2,
        beta1p: beta2,
        beta2p: beta1,
        splitting: split,
        g_eff: p.g_c_diff() * vr,
        g1_eff: 0.5 * (p.g_c_sum() + c * p.g_c_diff()),
        g2_eff: 0.5 * (p.g_c_sum() - c * p.g_c_diff()),
        gamma_s: gamma + 2.0 * p.gamma_c * vr,
        gamma_a: gamma - 2.0 * p.gamma_c * vr,
        gamma_as: p.gamma_c * c,
    })
}

impl DressedBasis {
    /// Waveguide-coupling weight of the symmetric state, (β₁ + β₂)².
    pub fn s_collective_weight(&self) -> f64 {
        let s = self.beta1 + self.beta2;
        s * s
    }

    /// Waveguide-coupling weight of the antisymmetric state, (β₁ − β₂)².
    ///
    /// Vanishes as δ₀ → 0, where |A⟩ becomes dark.
    pub fn a_collective_weight(&self) -> f64 {
        let d = self.beta1 - self.beta2;
        d * d
    }

    /// Drive amplitude onto |S⟩, (g_m1 β₂′ + g_m2 β₁′) / ĝ with
    /// ĝ² = (g_m1² + g_m2²)/2.
    ///
    /// The rms normalization removes the arbitrary common scale of the
    /// light couplings; with g_m1 = g_m2 this is β₁ + β₂.
    pub fn s_drive_weight(&self, p: &HybridParams) -> f64 {
        let g_rms = (0.5 * (p.g_m1 * p.g_m1 + p.g_m2 * p.g_m2)).sqrt();
        (p.g_m1 * self.beta2p + p.g_m2 * self.beta1p) / g_rms
    }

    /// Drive amplitude onto |A⟩, (g_m1 β₂ − g_m2 β₁) / ĝ.
    pub fn a_drive_weight(&self, p: &HybridParams) -> f64 {
        let g_rms = (0.5 * (p.g_m1 * p.g_m1 + p.g_m2 * p.g_m2)).sqrt();
        (p.g_m1 * self.beta2 - p.g_m2 * self.beta1) / g_rms
    }
}
