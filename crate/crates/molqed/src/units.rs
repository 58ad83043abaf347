//! Unit conventions and physical constants.
//!
//! Internally every rate and angular frequency is measured in units of the
//! total molecular linewidth γ and every time in units of 1/γ. Conversion to
//! laboratory units happens only at the I/O boundary, through the single
//! constant [`GAMMA_PHYS_RAD_PER_S`] (γ = 2π × 20 MHz, a typical linewidth
//! for narrow organic dye transitions).

/// Total molecular linewidth in angular-frequency units: γ = 2π × 20 MHz.
pub const GAMMA_PHYS_RAD_PER_S: f64 = 2.0 * std::f64::consts::PI * 20.0e6;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Planck constant, J·s.
pub const PLANCK_H: f64 = 6.626_070_15e-34;

/// One Debye in C·m.
pub const DEBYE: f64 = 3.335_640_952e-30;

/// Convert a duration in seconds to internal 1/γ units.
pub fn seconds_to_gamma(t_s: f64) -> f64 {
    t_s * GAMMA_PHYS_RAD_PER_S
}

/// Convert a duration in nanoseconds to internal 1/γ units.
pub fn ns_to_gamma(t_ns: f64) -> f64 {
    seconds_to_gamma(t_ns * 1e-9)
}

/// Convert an ordinary frequency in MHz (f, not ω) to internal γ units.
pub fn mhz_to_gamma(f_mhz: f64) -> f64 {
    2.0 * std::f64::consts::PI * f_mhz * 1e6 / GAMMA_PHYS_RAD_PER_S
}

/// Convert an internal γ-unit angular frequency back to MHz (f = ω/2π).
pub fn gamma_to_mhz(w: f64) -> f64 {
    w * GAMMA_PHYS_RAD_PER_S / (2.0 * std::f64::consts::PI) / 1e6
}
