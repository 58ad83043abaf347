//! Post-selected entanglement protocols.
//!
//! Two interferometric schemes condition on a detector click after
//! frequency-filtering out photons that did not Raman-scatter:
//!
//! - **qubit-photon CHSH**: one hybrid in one interferometer arm, a
//!   frequency shifter in the other; a click projects the hybrid onto a
//!   ground-state superposition and the CHSH correlator is read out against
//!   the interferometer phase.
//! - **two-qubit Bell pair**: hybrids in both arms behind a 50/50 splitter;
//!   a click projects the pair onto |Ψ±⟩ = (|−+⟩ ± |+−⟩)/√2.
//!
//! Each protocol exists in closed form (single-photon and coherent-state
//! input) and as seeded Monte-Carlo sampling of first-click times, with the
//! conditional state propagated from the click to the pulse end through
//! [`crate::evolution`].
//!
//! The first beam splitter is balanced internally: its asymmetry χ is
//! solved from the requirement of equal intensities at the recombiner,
//! χ² = P_R/(1 + P_R) for the single-hybrid scheme (50/50 for two hybrids).

use rayon::prelude::*;

use crate::error::Result;
use crate::evolution::{coherence_envelope, photon_flux, population_survival};
use crate::params::HybridParams;
use crate::rates::{raman_probability, RateSet};
use crate::rng::{Kahan, SplitMix64};

/// CHSH phase settings giving the maximal violation:
/// {Ψ_a, Ψ_a′, Φ_b, Φ_b′} = {π/4, 3π/4, 0, π/2}.
pub const CHSH_ANGLES: [f64; 4] = [
    std::f64::consts::FRAC_PI_4,
    3.0 * std::f64::consts::FRAC_PI_4,
    0.0,
    std::f64::consts::FRAC_PI_2,
];

/// Which post-selection protocol to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    Chsh,
    Bell,
}

/// Outcome of one protocol evaluation. Monte-Carlo runs fill the standard
/// errors; closed forms leave them `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolResult {
    pub n_bar: f64,
    pub success_prob: f64,
    pub success_stderr: Option<f64>,
    pub fidelity: Option<f64>,
    pub fidelity_stderr: Option<f64>,
    /// First-order (linearized) fidelity, for cross-checks.
    pub fidelity_linear: Option<f64>,
    pub s_parameter: Option<f64>,
    pub s_stderr: Option<f64>,
    /// Click-averaged fidelity reduction from qubit T₂ dephasing alone.
    pub t2_fidelity_reduction: Option<f64>,
    pub t2_fidelity_reduction_stderr: Option<f64>,
}

impl ProtocolResult {
    fn empty(n_bar: f64) -> Self {
        ProtocolResult {
            n_bar,
            success_prob: 0.0,
            success_stderr: None,
            fidelity: None,
            fidelity_stderr: None,
            fidelity_linear: None,
            s_parameter: None,
            s_stderr: None,
            t2_fidelity_reduction: None,
            t2_fidelity_reduction_stderr: None,
        }
    }
}

/// (1 − e^{−x})/x, stable through x = 0.
fn em1_over(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - 0.5 * x + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// Balanced-interferometer asymmetry for the single-hybrid scheme:
/// χ² = P_R/(1 + P_R).
pub fn balanced_chi_squared(p_r: f64) -> f64 {
    p_r / (1.0 + p_r)
}

/// CHSH correlator combination over the optimal angle set for a correlator
/// of the form E(Ψ, Φ) = amp · sin(Ψ − Φ). Equals 2√2·amp.
fn chsh_combination(amp: f64) -> f64 {
    let [a, ap, b, bp] = CHSH_ANGLES;
    amp * ((a - b).sin() - (a - bp).sin() + (ap - b).sin() + (ap - bp).sin())
}

/// Qubit-photon entanglement with a single incident photon.
///
/// The post-selected state is maximally entangled: the joint detection
/// probabilities give E(Ψ, Φ) = sin(Ψ − Φ) and S = 2√2 exactly. The success
/// probability is 2η P_R/(1 + P_R) under the balanced condition.
pub fn chsh_single_photon(p: &HybridParams) -> Result<ProtocolResult> {
    let p_r = raman_probability(p)?;
    // Joint probabilities P(±detector, ±qubit basis outcome) at angles
    // (Ψ, Φ): (1/4)(1 ± sin(Ψ − Φ)), combined into the correlator.
    let correlator = |psi: f64, phi: f64| {
        let p_pp = 0.25 * (1.0 + (psi - phi).sin());
        let p_mm = p_pp;
        let p_pm = 0.25 * (1.0 - (psi - phi).sin());
        let p_mp = p_pm;
        (p_pp + p_mm - p_pm - p_mp) / (p_pp + p_mm + p_pm + p_mp)
    };
    let [a, ap, b, bp] = CHSH_ANGLES;
    let s = correlator(a, b) - correlator(a, bp) + correlator(ap, b) + correlator(ap, bp);
    Ok(ProtocolResult {
        success_prob: 2.0 * p.eta * p_r / (1.0 + p_r),
        fidelity: Some(1.0),
        s_parameter: Some(s),
        ..ProtocolResult::empty(1.0)
    })
}

/// Qubit-photon CHSH violation with a coherent-state input of mean photon
/// number n̄, averaged over the click time.
pub fn chsh_coherent(p: &HybridParams, rates: &RateSet, n_bar: f64) -> ProtocolResult {
    let a = rates.p_r + rates.p_ro;
    let d = rates.p_d;
    let p_r = rates.p_r;
    let chi2 = balanced_chi_squared(p_r);
    let u = 1.0 - chi2;

    if n_bar == 0.0 {
        // Algebraic limit: prefactor and bracket cancel to 1.
        return ProtocolResult {
            s_parameter: Some(2.0 * std::f64::consts::SQRT_2),
            ..ProtocolResult::empty(0.0)
        };
    }

    let half = 0.5 * n_bar * u;
    // S = 2√2 · 4A P_R e^{-(n̄/2)(A+D)u} (n̄/2)u em1((n̄/2)(A-D)u) / denom,
    // the removable-singularity form of the click-time-averaged correlator.
    let numer = p_r * (-(half) * (a + d)).exp() * half * em1_over(half * (a - d));
    let denom = a * n_bar * chi2 + p_r * a * n_bar * u * em1_over(a * n_bar * u);
    let s = 2.0 * std::f64::consts::SQRT_2 * 4.0 * a * numer / denom;

    let success = p.eta * (n_bar * chi2 + p_r * n_bar * u * em1_over(a * n_bar * u));
    ProtocolResult {
        success_prob: success,
        s_parameter: Some(s),
        ..ProtocolResult::empty(n_bar)
    }
}

/// Two-qubit Bell-pair generation with a single incident photon: ideal
/// fidelity, success probability η P_R.
pub fn bell_single_photon(p: &HybridParams) -> Result<ProtocolResult> {
    let p_r = raman_probability(p)?;
    Ok(ProtocolResult {
        success_prob: p.eta * p_r,
        fidelity: Some(1.0),
        fidelity_linear: Some(1.0),
        ..ProtocolResult::empty(1.0)
    })
}

/// Two-qubit Bell-pair generation with a coherent-state input: click-time
/// averaged fidelity and success probability.
///
/// With `with_t2`, the qubit Gaussian dephasing enters the averaged
/// fidelity through the conservative full-pulse substitution
/// P_D n̄/2 → P_D n̄/2 + 2(T/T₂)²; the Monte-Carlo variant resolves the
/// actual click time instead.
pub fn bell_coherent(
    p: &HybridParams,
    rates: &RateSet,
    n_bar: f64,
    with_t2: bool,
) -> ProtocolResult {
    let a = rates.p_r + rates.p_ro;
    let d = rates.p_d;
    let half = 0.5 * n_bar;
    let x2 = match (with_t2, p.t2) {
        (true, Some(t2)) => 2.0 * (p.pulse_duration / t2).powi(2),
        _ => 0.0,
    };

    let fidelity = if n_bar == 0.0 {
        1.0
    } else {
        // second = (A/(A-D'))(e^{-D'n̄/2} - e^{-An̄/2})/(1 - e^{-An̄/2}) with
        // D'n̄/2 = Dn̄/2 + x2, written through em1_over to stay finite at
        // A = D'.
        let z = (a - d) * half - x2;
        let second = (-(d * half + x2)).exp() * em1_over(z) / em1_over(a * half);
        0.5 * (-a * half).exp() * (1.0 + second)
    };

    let f_linear = 1.0 - (a + 0.25 * d) * half;
    let success = p.eta * rates.p_r * n_bar * em1_over(a * half);
    ProtocolResult {
        success_prob: success,
        fidelity: Some(fidelity),
        fidelity_linear: Some(f_linear),
        ..ProtocolResult::empty(n_bar)
    }
}

/// Per-chunk Monte-Carlo accumulator.
#[derive(Default, Clone, Copy)]
struct McAcc {
    clicks: u64,
    f_sum: Kahan,
    f_sq: Kahan,
    s_sum: Kahan,
    s_sq: Kahan,
    t2_sum: Kahan,
    t2_sq: Kahan,
}

impl McAcc {
    fn merge(mut self, other: McAcc) -> McAcc {
        self.clicks += other.clicks;
        self.f_sum.merge(other.f_sum);
        self.f_sq.merge(other.f_sq);
        self.s_sum.merge(other.s_sum);
        self.s_sq.merge(other.s_sq);
        self.t2_sum.merge(other.t2_sum);
        self.t2_sq.merge(other.t2_sq);
        self
    }
}

fn mean_stderr(sum: &Kahan, sq: &Kahan, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum.value() / nf;
    if n < 2 {
        return (mean, f64::INFINITY);
    }
    let var = ((sq.value() - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Monte-Carlo estimate of a post-selection protocol.
///
/// Each trial samples whether the pulse produces a (first) click and, if
/// so, its time from the analytic click density by inverse-CDF; the
/// conditional state is then propagated from the click to the pulse end via
/// the closed ground-manifold evolution. Trials run in parallel over
/// deterministic per-trial random streams, so a fixed seed reproduces the
/// result bit for bit regardless of thread count.
pub fn monte_carlo_protocol(
    p: &HybridParams,
    rates: &RateSet,
    which: ProtocolKind,
    n_bar: f64,
    n_trials: u64,
    seed: u64,
) -> ProtocolResult {
    let prot = rates.protocol_view();
    let a = prot.p_rs; // P_R + P_RO
    let t_pulse = p.pulse_duration;
    let alpha2 = photon_flux(n_bar, t_pulse);
    let t2 = p.t2;

    // Per-protocol click statistics.
    let chi2 = balanced_chi_squared(rates.p_r);
    let u = 1.0 - chi2;
    let (p_click, w_flat) = match which {
        ProtocolKind::Bell => (
            p.eta * rates.p_r * n_bar * em1_over(0.5 * a * n_bar),
            0.0,
        ),
        ProtocolKind::Chsh => {
            let w_flat = n_bar * chi2;
            let w_exp = rates.p_r * n_bar * u * em1_over(a * n_bar * u);
            (p.eta * (w_flat + w_exp), w_flat / (w_flat + w_exp))
        }
    };

    // Decay constant of the exponential click-density component.
    let k_exp = match which {
        ProtocolKind::Bell => 0.5 * a * alpha2,
        ProtocolKind::Chsh => a * alpha2 * u,
    };
    let w_tail = -(-k_exp * t_pulse).exp_m1(); // 1 - e^{-kT}

    let kernel = |rng: &mut SplitMix64, acc: &mut McAcc| {
        if n_bar == 0.0 || rng.next_f64() >= p_click {
            return;
        }
        acc.clicks += 1;
        // First-click time: uniform component (unscattered arm leakage,
        // CHSH only) or truncated-exponential component.
        let t = if w_flat > 0.0 && rng.next_f64() < w_flat {
            rng.next_f64() * t_pulse
        } else if k_exp > 0.0 {
            -(-rng.next_f64() * w_tail).ln_1p() / k_exp
        } else {
            rng.next_f64() * t_pulse
        };
        let tau = t_pulse - t;

        match which {
            ProtocolKind::Bell => {
                // Spectator survives unflipped for [0, t]; after the click
                // the |1⟩ member must survive and the joint coherence is the
                // product of the two single-hybrid envelopes.
                let mu = 0.5 * alpha2;
                let s_pre = population_survival(&prot, mu, t);
                let s_post = population_survival(&prot, mu, tau);
                let coh = coherence_envelope(&prot, mu, tau, t2).powi(2);
                let f = 0.5 * s_pre * (s_post + coh);
                acc.f_sum.add(f);
                acc.f_sq.add(f * f);
                if let Some(t2v) = t2 {
                    // Fidelity knocked out by qubit dephasing alone,
                    // ½(1 - e^{-2(τ/T₂)²}).
                    let dt2 = -0.5 * (-2.0 * (tau / t2v).powi(2)).exp_m1();
                    acc.t2_sum.add(dt2);
                    acc.t2_sq.add(dt2 * dt2);
                }
            }
            ProtocolKind::Chsh => {
                let flux = alpha2 * u;
                let s_pre = population_survival(&prot, flux, t);
                let env = coherence_envelope(&prot, flux, tau, t2);
                let amp = 2.0 * chi2.sqrt() * u.sqrt() * rates.p_r.sqrt() * s_pre * env
                    / (chi2 + rates.p_r * u * s_pre);
                let s = chsh_combination(amp);
                acc.s_sum.add(s);
                acc.s_sq.add(s * s);
            }
        }
    };

    const CHUNK: u64 = 1 << 16;
    let n_chunks = n_trials.div_ceil(CHUNK);
    let total = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = McAcc::default();
            let hi = ((chunk + 1) * CHUNK).min(n_trials);
            for trial in chunk * CHUNK..hi {
                let mut rng = SplitMix64::for_trial(seed, trial);
                kernel(&mut rng, &mut acc);
            }
            acc
        })
        .reduce(McAcc::default, McAcc::merge);

    let nf = n_trials as f64;
    let success = total.clicks as f64 / nf;
    let success_stderr = (success * (1.0 - success) / nf).sqrt();
    let mut out = ProtocolResult {
        success_prob: success,
        success_stderr: Some(success_stderr),
        ..ProtocolResult::empty(n_bar)
    };
    if total.clicks > 0 {
        match which {
            ProtocolKind::Bell => {
                let (f, fe) = mean_stderr(&total.f_sum, &total.f_sq, total.clicks);
                out.fidelity = Some(f);
                out.fidelity_stderr = Some(fe);
                if t2.is_some() {
                    let (r, re) = mean_stderr(&total.t2_sum, &total.t2_sq, total.clicks);
                    out.t2_fidelity_reduction = Some(r);
                    out.t2_fidelity_reduction_stderr = Some(re);
                }
            }
            ProtocolKind::Chsh => {
                let (s, se) = mean_stderr(&total.s_sum, &total.s_sq, total.clicks);
                out.s_parameter = Some(s);
                out.s_stderr = Some(se);
            }
        }
    }
    out
}
