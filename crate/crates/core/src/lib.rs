//! Dressed asymptotic two-fermion states in QED.
//!
//! The crate works at the level of coherent-state eigenvalues: photon clouds
//! are carried as per-mode amplitudes on a discretised soft-photon phase space,
//! the phase operators as scalar world-line integrals, and the two charged
//! qubits as spin amplitudes on a finite momentum grid.
//!
//! Units are natural (`ħ = c = 1`) with the fermion mass as the unit of
//! energy, so times are measured in `1/m`. The metric signature is
//! `(+, −, −, −)`.
//!
//! Module map:
//!
//! - [`kinematics`]: four-vectors, mass-shell momenta, relative velocities.
//! - [`photon_modes`]: soft-photon grids, cloud amplitudes, photon numbers,
//!   coherent overlaps and the mass-shell gauge residue.
//! - [`asymptotic_dynamics`]: smeared oscillatory integrals of the two
//!   interaction-term groups, the small-`k` phase expansion, and the
//!   asymptotic current eigenvalue.
//! - [`phase_factors`]: the world-line phases `κ₁`, `κ₂`, `κ₁₂`, the phase
//!   eigenvalue `ϕ` and their cancellation.
//! - [`qubit_states`]: two-qubit states, free and dressed reduced spin
//!   density matrices, entanglement measures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic_dynamics;
mod error;
pub mod kinematics;
pub mod phase_factors;
pub mod photon_modes;
pub mod quadrature;
pub mod qubit_states;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

use std::f64::consts::PI;

/// Fine-structure constant, CODATA value.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035_999;

/// Electromagnetic coupling, stored as `α = e²/4π`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Coupling {
    alpha: f64,
}

impl Coupling {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling α must be finite and non-negative, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn fine_structure() -> Self {
        Self { alpha: FINE_STRUCTURE }
    }

    /// The free theory.
    pub fn zero() -> Self {
        Self { alpha: 0.0 }
    }

    /// `α = e²/4π`
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The charge `e = sqrt(4πα)`.
    pub fn charge(&self) -> f64 {
        (4.0 * PI * self.alpha).sqrt()
    }
}

impl Default for Coupling {
    fn default() -> Self {
        Self::fine_structure()
    }
}
