//! Ground-manifold density-matrix dynamics under coherent illumination.
//!
//! After adiabatic elimination of the excited dressed states, the hybrid
//! lives on the two ground levels |1⟩ = |g₁,g₂,−⟩ and |4⟩ = |g₁,g₂,+⟩. Under
//! a coherent drive of photon flux |α|² the populations obey a two-level
//! rate equation and the coherence decays independently — the closed-form
//! solutions implemented by [`evolve_closed`].
//!
//! [`evolve_numeric`] is the brute-force oracle for those solutions: it
//! assembles the effective jump operators from numerically inverted
//! non-Hermitian Hamiltonians (never from the closed-form rate
//! expressions) and integrates the resulting master equation with an
//! adaptive embedded Runge-Kutta pair. Both paths share only the
//! Hamiltonian transcription.
//!
//! Everything is phrased in the rotating frame where the bare qubit phase
//! of the coherence is absorbed; `omega_14` holds only the light-induced
//! shift per unit flux.

use num_complex::Complex64;

use crate::dressed::DressedBasis;
use crate::error::{Result, SimError};
use crate::nonhermitian::{build_hnh, invert4, ExcitationPath};
use crate::params::HybridParams;
use crate::rates::RateSet;

/// 2×2 density matrix on the ground manifold {|1⟩, |4⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub rho11: f64,
    pub rho44: f64,
    pub rho14: Complex64,
}

impl GroundState {
    /// |1⟩⟨1| — both hybrids start here in every protocol.
    pub fn ground_minus() -> Self {
        GroundState {
            rho11: 1.0,
            rho44: 0.0,
            rho14: Complex64::new(0.0, 0.0),
        }
    }

    /// Equal superposition (|1⟩ + e^{iφ}|4⟩)/√2 as a pure state.
    pub fn superposition(phase: f64) -> Self {
        GroundState {
            rho11: 0.5,
            rho44: 0.5,
            rho14: 0.5 * Complex64::new(phase.cos(), -phase.sin()),
        }
    }

    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho44
    }

    /// Positivity defect max(0, |ρ₁₄|² − ρ₁₁ρ₄₄); zero for physical states.
    pub fn positivity_defect(&self) -> f64 {
        (self.rho14.norm_sqr() - self.rho11 * self.rho44).max(0.0)
    }
}

/// Closed-form propagation over a time `t` at photon flux `alpha2`.
///
/// Populations relax toward the P_IR/P_RS balance with total rate
/// (P_RS + P_IR)|α|²; the coherence evolves as
/// exp((iω₁₄ − 𝒫_c/2)|α|²t), with an optional qubit Gaussian dephasing term
/// (t/T₂)² added to the decay exponent.
pub fn evolve_closed(
    rho0: &GroundState,
    rates: &RateSet,
    alpha2: f64,
    t: f64,
    t2: Option<f64>,
) -> GroundState {
    let s = rates.p_rs + rates.p_ir;
    let (rho11, rho44) = if s > 0.0 && alpha2 * t > 0.0 {
        let up = rates.p_ir / s;
        let down = rates.p_rs / s;
        let decay = (-s * alpha2 * t).exp();
        (
            rho0.rho11 * (up + down * decay) + rho0.rho44 * up * (1.0 - decay),
            rho0.rho44 * (down + up * decay) + rho0.rho11 * down * (1.0 - decay),
        )
    } else {
        (rho0.rho11, rho0.rho44)
    };
    let mut exponent = Complex64::new(-0.5 * rates.p_c, rates.omega_14) * alpha2 * t;
    if let Some(t2) = t2 {
        exponent -= (t / t2).powi(2);
    }
    GroundState {
        rho11,
        rho44,
        rho14: rho0.rho14 * exponent.exp(),
    }
}

/// Coherence envelope |ρ₁₄(t)|/|ρ₁₄(0)| under the same closed dynamics.
pub fn coherence_envelope(rates: &RateSet, alpha2: f64, t: f64, t2: Option<f64>) -> f64 {
    let mut exponent = -0.5 * rates.p_c * alpha2 * t;
    if let Some(t2) = t2 {
        exponent -= (t / t2).powi(2);
    }
    exponent.exp()
}

/// Photon flux |α|² for a pulse of mean photon number n̄ and duration T:
/// the two clocks of the drive convention, n̄ = |α|²T.
pub fn photon_flux(n_bar: f64, pulse_duration: f64) -> f64 {
    n_bar / pulse_duration
}

/// Survival probability of |1⟩ population over `t` (no transfer back),
/// starting from |1⟩⟨1|.
pub fn population_survival(rates: &RateSet, alpha2: f64, t: f64) -> f64 {
    evolve_closed(&GroundState::ground_minus(), rates, alpha2, t, None).rho11
}

/// Secular generator of the effective master equation on {|1⟩, |4⟩}, per
/// unit photon flux, with every coefficient assembled from numeric matrix
/// inverses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveGenerator {
    /// Population transfer rate |1⟩ → |4⟩ (Raman), Σ_k |⟨4|L_k|1⟩|².
    pub raman: f64,
    /// Waveguide share of `raman` (collective-channel weight γ_1D/(γ_1D+γ_c)).
    pub raman_guided: f64,
    /// Population transfer rate |4⟩ → |1⟩ (inverse Raman).
    pub inverse_raman: f64,
    /// Pure dephasing rate Σ_k |⟨1|L_k|1⟩ − ⟨4|L_k|4⟩|².
    pub dephasing: f64,
    /// Coherence frequency: light-shift difference plus the elastic
    /// cross-term Im Σ_k ⟨1|L_k|1⟩⟨4|L_k|4⟩*.
    pub shift: f64,
}

impl EffectiveGenerator {
    /// Assembles the generator by inverting both path Hamiltonians and
    /// contracting them with the drive vectors and jump amplitudes.
    pub fn from_params(p: &HybridParams, d: &DressedBasis) -> Result<Self> {
        Self::from_params_at(p, d, d.g_eff, 0.0)
    }

    /// Same, at explicit detuning offsets.
    pub fn from_params_at(
        p: &HybridParams,
        d: &DressedBasis,
        eps1: f64,
        eps2: f64,
    ) -> Result<Self> {
        let g1 = invert4(&build_hnh(p, d, ExcitationPath::FromMinus, eps1, eps2))?;
        let g2 = invert4(&build_hnh(p, d, ExcitationPath::FromPlus, eps1, eps2))?;

        // Drive vectors out of |1⟩ and |4⟩ over the excited basis
        // {S+, S−, A+, A−}, with the light coupling normalized to the
        // waveguide rate.
        let sq_1d = p.gamma_1d.sqrt();
        let sd = sq_1d * d.s_drive_weight(p);
        let ad = sq_1d * d.a_drive_weight(p);
        let v1 = [0.0, sd, 0.0, ad];
        let v4 = [sd, 0.0, ad, 0.0];

        // Jump amplitudes ⟨1|L_k and ⟨4|L_k over the excited basis, one row
        // pair per decay family (intrinsic per molecule, plus the lumped
        // waveguide + collective channel).
        let gi = p.gamma_i.sqrt();
        let gc = (p.gamma_1d + p.gamma_c).sqrt();
        let rows: [([f64; 4], [f64; 4]); 3] = [
            (
                [0.0, gi * d.beta2p, 0.0, gi * d.beta2],
                [gi * d.beta2p, 0.0, gi * d.beta2, 0.0],
            ),
            (
                [0.0, gi * d.beta1p, 0.0, -gi * d.beta1],
                [gi * d.beta1p, 0.0, -gi * d.beta1, 0.0],
            ),
            (
                [
                    0.0,
                    gc * (d.beta1p + d.beta2p),
                    0.0,
                    gc * (d.beta2 - d.beta1),
                ],
                [
                    gc * (d.beta1p + d.beta2p),
                    0.0,
                    gc * (d.beta2 - d.beta1),
                    0.0,
                ],
            ),
        ];

        let contract = |row: &[f64; 4], g: &crate::nonhermitian::ComplexMatrix4, v: &[f64; 4]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                if row[i] == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    if v[j] == 0.0 {
                        continue;
                    }
                    acc += row[i] * g.e[i][j] * v[j];
                }
            }
            acc
        };

        let mut raman = 0.0;
        let mut inverse_raman = 0.0;
        let mut dephasing = 0.0;
        let mut cross_shift = 0.0;
        for (row1, row4) in &rows {
            let a = contract(row1, &g1, &v1); // 1 -> 1 elastic
            let b = contract(row4, &g1, &v1); // 1 -> 4 Raman
            let c = contract(row1, &g2, &v4); // 4 -> 1 inverse Raman
            let dd = contract(row4, &g2, &v4); // 4 -> 4 elastic
            raman += b.norm_sqr();
            inverse_raman += c.norm_sqr();
            dephasing += (a - dd).norm_sqr();
            cross_shift += (a * dd.conj()).im;
        }
        // Waveguide share of the Raman transfer: the guided part of the
        // lumped collective channel.
        let collective = p.gamma_1d + p.gamma_c;
        let raman_guided = if collective > 0.0 {
            contract(&rows[2].1, &g1, &v1).norm_sqr() * p.gamma_1d / collective
        } else {
            0.0
        };

        // Light shifts of the two ground levels from the effective
        // Hamiltonian, Re(V† G V) each.
        let quad = |g: &crate::nonhermitian::ComplexMatrix4, v: &[f64; 4]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                if v[i] == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    if v[j] == 0.0 {
                        continue;
                    }
                    acc += v[i] * g.e[i][j] * v[j];
                }
            }
            acc
        };
        let shift = quad(&g1, &v1).re - quad(&g2, &v4).re + cross_shift;

        Ok(EffectiveGenerator {
            raman,
            raman_guided,
            inverse_raman,
            dephasing,
            shift,
        })
    }

    /// The generator coefficients packaged as a [`RateSet`], for feeding the
    /// closed-form propagator with numerically derived rates.
    pub fn to_rate_set(&self) -> RateSet {
        RateSet {
            p_r: self.raman_guided,
            p_ro: self.raman - self.raman_guided,
            p_ir: self.inverse_raman,
            p_d: self.dephasing,
            p_rs: self.raman,
            p_c: self.raman + self.inverse_raman + self.dephasing,
            omega_14: self.shift,
        }
    }
}

/// Integrates the effective master equation numerically from `rho0` over
/// `t` at flux `alpha2`, with local error per step below `tol`.
pub fn evolve_numeric(
    rho0: &GroundState,
    p: &HybridParams,
    d: &DressedBasis,
    alpha2: f64,
    t: f64,
    tol: f64,
) -> Result<GroundState> {
    let gen = EffectiveGenerator::from_params(p, d)?;
    let deriv = |y: &[f64; 4]| -> [f64; 4] {
        let half_pc = 0.5 * (gen.raman + gen.inverse_raman + gen.dephasing);
        [
            alpha2 * (-gen.raman * y[0] + gen.inverse_raman * y[1]),
            alpha2 * (gen.raman * y[0] - gen.inverse_raman * y[1]),
            alpha2 * (-half_pc * y[2] - gen.shift * y[3]),
            alpha2 * (-half_pc * y[3] + gen.shift * y[2]),
        ]
    };
    let y0 = [rho0.rho11, rho0.rho44, rho0.rho14.re, rho0.rho14.im];
    let y = rk45(&deriv, y0, t, tol)?;
    Ok(GroundState {
        rho11: y[0],
        rho44: y[1],
        rho14: Complex64::new(y[2], y[3]),
    })
}

// Dormand-Prince 5(4) coefficients (autonomous system, so no stage times).
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand-Prince 5(4) for a 4-component autonomous linear system.
fn rk45<F>(f: &F, mut y: [f64; 4], t_end: f64, tol: f64) -> Result<[f64; 4]>
where
    F: Fn(&[f64; 4]) -> [f64; 4],
{
    if t_end == 0.0 {
        return Ok(y);
    }
    let mut t = 0.0;
    let mut h = (t_end / 16.0).min(1.0).max(t_end * 1e-6);
    let h_min = t_end * 1e-14;
    let mut k = [[0.0f64; 4]; 7];
    let mut steps = 0usize;
    while t < t_end {
        if h < h_min {
            return Err(SimError::IntegrationFailure { t });
        }
        if t + h > t_end {
            h = t_end - t;
        }
        k[0] = f(&y);
        for stage in 0..6 {
            let mut ys = y;
            for j in 0..4 {
                for (i, ki) in k.iter().enumerate().take(stage + 1) {
                    ys[j] += h * DP_A[stage][i] * ki[j];
                }
            }
            k[stage + 1] = f(&ys);
        }
        // 5th-order solution is the last stage evaluation point.
        let mut y5 = y;
        for j in 0..4 {
            for (i, ki) in k.iter().enumerate().take(6) {
                y5[j] += h * DP_A[5][i] * ki[j];
            }
        }
        // Embedded error estimate.
        let mut err: f64 = 0.0;
        for j in 0..4 {
            let mut e = 0.0;
            for (i, ki) in k.iter().enumerate() {
                e += DP_E[i] * ki[j];
            }
            e *= h;
            let scale = tol * (1.0 + y[j].abs());
            err = err.max((e / scale).abs());
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        steps += 1;
        if steps > 10_000_000 {
            return Err(SimError::IntegrationFailure { t });
        }
    }
    Ok(y)
}
