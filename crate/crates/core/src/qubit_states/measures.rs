//! Two-qubit entanglement measures.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SpinDensityMatrix, SpinMatrix, SpinVector, TwoQubitState};
use crate::error::{Error, Result};

fn hermitian_sqrt(m: &SpinMatrix) -> SpinMatrix {
    let eig = m.symmetric_eigen();
    let d = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    eig.eigenvectors * SpinMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint()
}

/// `σ_y ⊗ σ_y`
fn spin_flip() -> SpinMatrix {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    Matrix4::new(z, z, z, -o, z, z, o, z, z, o, z, z, -o, z, z, z)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, `λᵢ²` the eigenvalues
/// of `√ρ ρ̃ √ρ` in decreasing order.
pub fn concurrence(rho: &SpinDensityMatrix) -> f64 {
    let r = rho.matrix();
    let y = spin_flip();
    let tilde = y * r.conjugate() * y;
    let s = hermitian_sqrt(r);
    let m = s * tilde * s;
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut l: Vec<f64> = m.symmetric_eigenvalues().iter().map(|&x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Transpose on the second qubit.
pub fn partial_transpose(m: &SpinMatrix) -> SpinMatrix {
    SpinMatrix::from_fn(|r, c| {
        let (i, j) = (r / 2, r % 2);
        let (k, l) = (c / 2, c % 2);
        m[(2 * i + l, 2 * k + j)]
    })
}

/// Sum of the moduli of the negative eigenvalues of `ρ^{T₂}`.
pub fn negativity(rho: &SpinDensityMatrix) -> f64 {
    partial_transpose(rho.matrix())
        .symmetric_eigenvalues()
        .iter()
        .filter(|&&x| x < 0.0)
        .map(|x| -x)
        .sum::<f64>()
        + 0.0
}

fn binary_entropy_of(eigs: [f64; 2]) -> f64 {
    eigs.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy, in bits, of either qubit of a pure spin state.
pub fn entropy_of_spin_vector(chi: &SpinVector) -> f64 {
    let n2 = chi.norm_squared();
    let a = Matrix2::from_fn(|i, k| (chi[2 * i] * chi[2 * k].conj() + chi[2 * i + 1] * chi[2 * k + 1].conj()) / n2);
    // eigenvalues of a 2×2 Hermitian matrix
    let tr = 0.5 * (a[(0, 0)].re + a[(1, 1)].re);
    let gap = (0.25 * (a[(0, 0)].re - a[(1, 1)].re).powi(2) + a[(0, 1)].norm_sqr()).sqrt();
    binary_entropy_of([tr + gap, (tr - gap).max(0.0)])
}

/// Entanglement entropy of a state whose spin part factorises from the
/// momentum distribution. Otherwise [`Error::NotFactorized`].
pub fn entropy_of_entanglement(state: &TwoQubitState) -> Result<f64> {
    let lead = state
        .pairs()
        .iter()
        .max_by(|a, b| a.amplitudes.norm_squared().total_cmp(&b.amplitudes.norm_squared()))
        .ok_or(Error::NotFactorized)?;
    let chi = lead.amplitudes / Complex64::new(lead.amplitudes.norm(), 0.0);
    for pair in state.pairs() {
        let along = chi.dotc(&pair.amplitudes);
        let rest = (pair.amplitudes - chi * along).norm();
        if rest > 1e-10 * pair.amplitudes.norm().max(1e-300) && rest > 1e-14 {
            return Err(Error::NotFactorized);
        }
    }
    Ok(entropy_of_spin_vector(&chi))
}

/// Measures of one density matrix, for JSON export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementSummary {
    pub concurrence: f64,
    pub negativity: f64,
    pub purity: f64,
    /// Only for momentum-factorised pure spin states.
    pub entropy_bits: Option<f64>,
}

impl EntanglementSummary {
    pub fn of(rho: &SpinDensityMatrix, state: Option<&TwoQubitState>) -> Self {
        Self {
            concurrence: concurrence(rho),
            negativity: negativity(rho),
            purity: rho.purity(),
            entropy_bits: state.and_then(|s| entropy_of_entanglement(s).ok()),
        }
    }
}
