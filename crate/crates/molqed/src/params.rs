//! Physical parameters of one molecule-pair + qubit hybrid.
//!
//! All rates and angular frequencies are stored in units of the total
//! molecular linewidth γ = γ_1D + γ_c + γ_i, which validation pins to 1.
//! The light-molecule couplings `g_m1`, `g_m2` carry an arbitrary common
//! scale; every normalized output is invariant under rescaling both.

use crate::error::{Result, SimError};

/// Validated parameter set for a single hybrid.
///
/// Constructed through [`HybridParams::validate`]; the reference operating
/// point is available as [`HybridParams::reference_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    /// Decay rate into the 1-D waveguide mode (units of γ).
    pub gamma_1d: f64,
    /// Collective decay rate of the molecule pair (units of γ).
    pub gamma_c: f64,
    /// Intrinsic decay rate per molecule (units of γ).
    pub gamma_i: f64,
    /// Qubit-molecule coupling of molecule 1 (units of γ).
    pub g_c1: f64,
    /// Qubit-molecule coupling of molecule 2 (units of γ).
    pub g_c2: f64,
    /// Light-molecule coupling amplitude of molecule 1 (arbitrary common scale).
    pub g_m1: f64,
    /// Light-molecule coupling amplitude of molecule 2 (arbitrary common scale).
    pub g_m2: f64,
    /// Dipole-dipole coupling V between the molecules (units of γ).
    pub v_dd: f64,
    /// Molecular detuning δ₀ = ω_m1 − ω_m2 (units of γ).
    pub delta_0: f64,
    /// Qubit splitting ω_q (units of γ).
    pub omega_q: f64,
    /// Probe detuning Δ = ω_m − ω_p (units of γ).
    pub delta: f64,
    /// Photodetector efficiency η ∈ [0, 1].
    pub eta: f64,
    /// Qubit Gaussian coherence time T₂ (units of 1/γ), if modelled.
    pub t2: Option<f64>,
    /// Pulse duration T (units of 1/γ).
    pub pulse_duration: f64,
    /// Whether validation enforces the Raman resonance 2𝒱 = ω_q by solving
    /// for δ₀ (and pinning Δ to the optimized probe detuning).
    pub resonance: bool,
}

/// Tolerance on |γ_1D + γ_c + γ_i − 1|.
pub const GAMMA_SUM_TOL: f64 = 1e-12;

impl HybridParams {
    /// Total molecular decay rate γ; 1 by construction after validation.
    pub fn gamma(&self) -> f64 {
        self.gamma_1d + self.gamma_c + self.gamma_i
    }

    /// Difference of the qubit-molecule couplings, g_c1 − g_c2.
    ///
    /// The two couplings can have opposite signs, so the difference can
    /// exceed either magnitude.
    pub fn g_c_diff(&self) -> f64 {
        self.g_c1 - self.g_c2
    }

    /// Sum of the qubit-molecule couplings, g_c1 + g_c2.
    pub fn g_c_sum(&self) -> f64 {
        self.g_c1 + self.g_c2
    }

    /// Dimensionless moderate-coupling figure max(g_c²)/(γ ω_q).
    ///
    /// The closed-form element products are derived for values below 1.
    pub fn moderate_coupling_figure(&self) -> f64 {
        let g2 = self.g_c1.abs().max(self.g_c2.abs()).powi(2);
        g2 / (self.gamma() * self.omega_q)
    }

    /// Checks ranges, renormalizes nothing, and applies the resonance
    /// constraint when requested.
    ///
    /// Returns the validated record. Idempotent: validating an already
    /// validated record returns it unchanged.
    pub fn validate(mut self) -> Result<Self> {
        for (name, v) in [
            ("gamma_1d", self.gamma_1d),
            ("gamma_c", self.gamma_c),
            ("gamma_i", self.gamma_i),
            ("pulse_duration", self.pulse_duration),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(SimError::NegativeRate(format!("{name} = {v}")));
            }
        }
        if let Some(t2) = self.t2 {
            if !t2.is_finite() || t2 <= 0.0 {
                return Err(SimError::NegativeRate(format!("t2 = {t2}")));
            }
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(SimError::NegativeRate(format!("eta = {}", self.eta)));
        }
        if !self.omega_q.is_finite() || self.omega_q <= 0.0 {
            return Err(SimError::NegativeRate(format!("omega_q = {}", self.omega_q)));
        }
        let sum = self.gamma();
        if (sum - 1.0).abs() > GAMMA_SUM_TOL {
            return Err(SimError::RateSumMismatch(sum));
        }
        if self.resonance {
            self.delta_0 = resonance_delta0(self.v_dd, self.omega_q)?;
        }
        Ok(self)
    }

    /// The reference operating point used for every numerical example:
    /// γ_1D = 0.1γ, γ_c = γ_i = 0.45γ, V/ω_q = 0.2, (g_c1 − g_c2)/γ = 4,
    /// η = 50 %, pulse duration 50 ns, qubit splitting ω_q = 50γ.
    ///
    /// ω_q only enters through ratios; 50γ (≈ 2π × 1 GHz)
    /// keeps the moderate-coupling condition g_c²/(γω_q) < 1 comfortably
    /// satisfied. The couplings are split antisymmetrically,
    /// g_c1 = −g_c2 = 2γ.
    pub fn reference_point() -> Self {
        let omega_q = 50.0;
        HybridParams {
            gamma_1d: 0.1,
            gamma_c: 0.45,
            gamma_i: 0.45,
            g_c1: 2.0,
            g_c2: -2.0,
            g_m1: 1.0,
            g_m2: 1.0,
            v_dd: 0.2 * omega_q,
            delta_0: 0.0, // set by the resonance constraint in validate()
            omega_q,
            delta: 0.0,
            eta: 0.5,
            t2: None,
            pulse_duration: crate::units::ns_to_gamma(50.0),
            resonance: true,
        }
        .validate()
        .expect("reference working point is valid")
    }
}

/// Molecular detuning δ₀ that tunes the dressed-state splitting onto the
/// qubit: δ₀ = sqrt(ω_q² − 4V²).
///
/// Requires 2V ≤ ω_q; the companion optimized probe detuning is
/// [`optimal_probe_detuning`].
pub fn resonance_delta0(v_dd: f64, omega_q: f64) -> Result<f64> {
    let two_v = 2.0 * v_dd.abs();
    if two_v > omega_q {
        return Err(SimError::ResonanceInfeasible { two_v, omega_q });
    }
    Ok((omega_q * omega_q - 4.0 * v_dd * v_dd).max(0.0).sqrt())
}

/// Optimized probe detuning Δ = −ω_q/2 + 𝒢 for a given effective coupling 𝒢.
pub fn optimal_probe_detuning(g_eff: f64, omega_q: f64) -> f64 {
    -0.5 * omega_q + g_eff
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_reference_fraction_split() {
        // gamma_c/gamma = gamma_i/gamma = 0.45 with gamma_1d = 0.1.
        let p = HybridParams::reference_point();
        assert_eq!(p.gamma_1d, 0.1);
        assert!((p.gamma() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_rate_sum_mismatch() {
        let p = HybridParams {
            gamma_1d: 0.5,
            gamma_c: 0.5,
            gamma_i: 0.5,
            ..HybridParams::reference_point()
        };
        assert!(matches!(p.validate(), Err(SimError::RateSumMismatch(s)) if (s - 1.5).abs() < 1e-12));
    }

    #[test]
    fn rejects_infeasible_resonance() {
        let p = HybridParams {
            v_dd: 0.6 * 50.0, // 2V = 1.2 omega_q
            ..HybridParams::reference_point()
        };
        assert!(matches!(
            p.validate(),
            Err(SimError::ResonanceInfeasible { .. })
        ));
    }

    #[test]
    fn rejects_negative_rate_and_bad_eta() {
        let p = HybridParams {
            gamma_1d: -0.1,
            gamma_c: 0.65,
            ..HybridParams::reference_point()
        };
        assert!(matches!(p.validate(), Err(SimError::NegativeRate(_))));
        let p = HybridParams {
            eta: 1.5,
            ..HybridParams::reference_point()
        };
        assert!(matches!(p.validate(), Err(SimError::NegativeRate(_))));
    }

    #[test]
    fn resonance_delta0_limits() {
        // V = 0 leaves delta_0 = omega_q.
        assert_eq!(resonance_delta0(0.0, 1.0).unwrap(), 1.0);
        // V = omega_q/2 closes the gap entirely.
        assert!(resonance_delta0(0.5, 1.0).unwrap().abs() < 1e-12);
        // V = 0.2 omega_q: delta_0 = sqrt(1 - 0.16) = sqrt(0.84).
        let d0 = resonance_delta0(0.2, 1.0).unwrap();
        assert!((d0 - 0.84_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn resonance_identity_holds_to_machine_precision() {
        // 4V^2 + delta_0^2 = omega_q^2 within 1e-12 relative, over a sweep.
        for k in 0..500 {
            let omega_q = 1.0 + 99.0 * (k as f64) / 499.0;
            let v = 0.499 * omega_q * ((k * 7919 % 1000) as f64 / 1000.0);
            let d0 = resonance_delta0(v, omega_q).unwrap();
            let lhs = 4.0 * v * v + d0 * d0;
            assert!((lhs - omega_q * omega_q).abs() <= 1e-12 * omega_q * omega_q);
        }
    }

    #[test]
    fn optimal_probe_detuning_sits_half_a_qubit_below_resonance() {
        // At the working point G = 0.8, omega_q = 50: Delta = -24.2.
        let d = optimal_probe_detuning(0.8, 50.0);
        assert!((d - (-24.2)).abs() < 1e-12);
    }

    #[test]
    fn validate_is_idempotent() {
        let p = HybridParams::reference_point();
        let once = p.validate().unwrap();
        let twice = once.validate().unwrap();
        assert_eq!(once, twice);
    }
}
