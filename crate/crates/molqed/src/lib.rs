//! Desk-scale simulator for an optical interface between superconducting
//! qubits and photons, mediated by dipole-coupled molecule pairs embedded in
//! an optical waveguide.
//!
//! The library is organized around the chain of quantities that the hybrid
//! architecture produces:
//!
//! - [`params`] — validated physical parameters in units of the total
//!   molecular linewidth γ.
//! - [`dressed`] — the symmetric/antisymmetric dressed basis of the
//!   dipole-coupled molecule pair and its derived couplings.
//! - [`nonhermitian`] — the two 4×4 non-Hermitian Hamiltonians of the Raman
//!   manifold, their numeric inverses, and the closed-form element products
//!   they are checked against.
//! - [`rates`] — per-photon scattering, loss, inverse-Raman and dephasing
//!   probabilities, plus single-molecule scattering coefficients and the
//!   qubit-readout photon budget.
//! - [`evolution`] — ground-manifold density-matrix dynamics under coherent
//!   drive: closed-form solutions and an independent adaptive Runge-Kutta
//!   integrator of the effective master equation.
//! - [`protocols`] — post-selected entanglement protocols (qubit-photon CHSH
//!   and two-qubit Bell-pair generation), in closed form and as seeded
//!   Monte-Carlo click sampling.
//! - [`electrostatics`] — point-charge and finite-difference estimates of the
//!   Cooper-pair field at the molecule and the resulting qubit-molecule
//!   coupling strength.
//!
//! All internal rates and frequencies are expressed in units of the total
//! molecular decay rate γ = γ_1D + γ_c + γ_i = 1; [`units`] holds the single
//! conversion constant to laboratory units.

pub mod dressed;
pub mod electrostatics;
pub mod error;
pub mod evolution;
pub mod nonhermitian;
pub mod params;
pub mod protocols;
pub mod rates;
pub mod rng;
pub mod units;

pub use error::SimError;
pub use params::HybridParams;
