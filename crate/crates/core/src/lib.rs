//! Spectral analysis of adiabatic quasi-periodic Schrödinger operators near
//! resonant band interaction.
//!
//! The crate covers the full numerical chain: finite-gap periodic spectra and
//! the Bloch quasi-momentum (`bloch`), complex-momentum phase and action
//! integrals with tunneling coefficients (`actions`), admissibility checks and
//! regime classification on the (alpha, E) plane (`regimes`), Bohr-Sommerfeld
//! ladders and resonant pairs (`ladder`), predicted spectral intervals with
//! density-of-states weights and Lyapunov profiles (`predictor`), the model
//! monodromy cocycle with Lyapunov, resolvent, and density-of-states
//! experiments (`cocycle`), and the two-gap symmetry constants theta_n and
//! Lambda_n (`lambdan`).

pub mod actions;
pub mod bloch;
pub mod cocycle;
pub mod config;
pub mod ladder;
pub mod lambdan;
pub mod predictor;
pub mod regimes;
pub mod report;
pub mod util;

pub use bloch::{build_spectrum, Momentum, PeriodicSpectrum, Sheet};
