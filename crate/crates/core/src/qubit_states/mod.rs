//! Two charged spin-½ fermions on a finite momentum grid.
//!
//! A state is a list of momentum pairs `a = (p₁, p₂)` with quadrature
//! weights `w_a` and four spin amplitudes `φ_a` each, in the basis order
//! `↑↑, ↑↓, ↓↑, ↓↓`. The discrete state vector is
//! `Σ_a sqrt(w_a) φ_a e^{−iΘ_a} |a⟩` where `Θ_a` is the dressing phase of the
//! pair (zero for the free state). The fermions are distinguishable.

mod io;
mod measures;

pub use io::{
    read_state, write_density_csv, write_density_json, write_state, DensityMatrixRecord, PairRecord, StateFile,
};
pub use measures::{
    concurrence, entropy_of_entanglement, entropy_of_spin_vector, negativity, partial_transpose, EntanglementSummary,
};

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{OnShellMomentum, ThreeVector};
use crate::phase_factors::kappa_self;
use crate::sum::ordered_map;
use crate::Coupling;

pub type SpinVector = Vector4<Complex64>;
pub type SpinMatrix = Matrix4<Complex64>;

/// Basis labels in matrix order.
pub const BASIS: [&str; 4] = ["up_up", "up_down", "down_up", "down_down"];

/// Tolerance on `Σ w |φ|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Largest momentum grid accepted by [`joint_matrix_with_phases`].
pub const JOINT_PAIR_LIMIT: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumPair {
    pub p1: OnShellMomentum,
    pub p2: OnShellMomentum,
    pub weight: f64,
    pub amplitudes: SpinVector,
}

impl MomentumPair {
    pub fn new(p1: OnShellMomentum, p2: OnShellMomentum, weight: f64, amplitudes: [Complex64; 4]) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pair weight must be positive, got {weight}"
            )));
        }
        if amplitudes.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("spin amplitudes must be finite".into()));
        }
        Ok(Self {
            p1,
            p2,
            weight,
            amplitudes: SpinVector::from(amplitudes),
        })
    }

    fn norm_sqr(&self) -> f64 {
        self.weight * self.amplitudes.norm_squared()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    pairs: Vec<MomentumPair>,
}

impl TwoQubitState {
    /// Fails with [`Error::NotNormalized`] unless `Σ w |φ|² = 1`.
    pub fn new(pairs: Vec<MomentumPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("momentum grid is empty".into()));
        }
        let state = Self { pairs };
        state.check_normalized()?;
        Ok(state)
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(mut pairs: Vec<MomentumPair>) -> Result<Self> {
        let n2: f64 = crate::sum::sum(pairs.iter().map(MomentumPair::norm_sqr));
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        for p in &mut pairs {
            p.amplitudes *= Complex64::new(s, 0.0);
        }
        Self::new(pairs)
    }

    /// `χ ⊗ f`: one spin vector shared by every pair, with per-pair momentum
    /// amplitudes.
    pub fn product(spin: [Complex64; 4], grid: &[(OnShellMomentum, OnShellMomentum, f64, Complex64)]) -> Result<Self> {
        let pairs = grid
            .iter()
            .map(|&(p1, p2, w, f)| MomentumPair::new(p1, p2, w, spin.map(|s| s * f)))
            .collect::<Result<Vec<_>>>()?;
        Self::normalized(pairs)
    }

    pub fn pairs(&self) -> &[MomentumPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        crate::sum::sum(self.pairs.iter().map(MomentumPair::norm_sqr))
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n2 = self.norm_sqr();
        if !((n2 - 1.0).abs() <= NORMALIZATION_TOL) {
            return Err(Error::NotNormalized(n2));
        }
        Ok(())
    }
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDensityMatrix(SpinMatrix);

impl SpinDensityMatrix {
    pub const TOL: f64 = 1e-12;

    /// Checks hermiticity, unit trace and positivity, each to [`Self::TOL`].
    pub fn new(m: SpinMatrix) -> Result<Self> {
        let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(herm <= Self::TOL) {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if !((tr.re - 1.0).abs() <= Self::TOL && tr.im.abs() <= Self::TOL) {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let h = hermitian_part(&m);
        let min = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if !(min >= -Self::TOL) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(h))
    }

    /// `|χ⟩⟨χ|` for a normalised spin vector.
    pub fn pure(spin: &SpinVector) -> Result<Self> {
        Self::new(spin * spin.adjoint())
    }

    pub fn matrix(&self) -> &SpinMatrix {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = self.0.symmetric_eigenvalues();
        let mut v = [e[0], e[1], e[2], e[3]];
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Largest element-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn hermitian_part(m: &SpinMatrix) -> SpinMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Per-pair dressing phase `Θ_a = κ(R₁,t) + κ(R₂,t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedPhaseAssignment {
    phases: Vec<f64>,
}

impl DressedPhaseAssignment {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("dressing phases must be finite".into()));
        }
        Ok(Self { phases })
    }

    /// All phases zero, i.e. the free state.
    pub fn zeros(n: usize) -> Self {
        Self { phases: vec![0.0; n] }
    }

    /// Self phases of both fermions of every pair, velocities on the mass
    /// shell, world lines through `x1`, `x2` at time `t`.
    pub fn from_kinematics(
        state: &TwoQubitState,
        x1: ThreeVector,
        x2: ThreeVector,
        t: f64,
        t0: f64,
        coupling: Coupling,
    ) -> Result<Self> {
        let phases = state
            .pairs
            .iter()
            .map(|pair| {
                Ok(kappa_self(pair.p1.velocity(), x1, t, t0, coupling)?
                    + kappa_self(pair.p2.velocity(), x2, t, t0, coupling)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(phases)
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    fn check_matches(&self, state: &TwoQubitState) -> Result<()> {
        if self.phases.len() != state.len() {
            return Err(Error::GridMismatch(format!(
                "{} phases for {} momentum pairs",
                self.phases.len(),
                state.len()
            )));
        }
        Ok(())
    }
}

fn pair_index(state: &TwoQubitState, a: usize) -> Result<&MomentumPair> {
    state
        .pairs
        .get(a)
        .ok_or_else(|| Error::InvalidParameter(format!("pair index {a} outside grid of {}", state.len())))
}

/// `S(a, b) = φ(a) φ(b)†`.
pub fn amplitude_matrix_s(state: &TwoQubitState, a: usize, b: usize) -> Result<SpinMatrix> {
    let (pa, pb) = (pair_index(state, a)?, pair_index(state, b)?);
    Ok(pa.amplitudes * pb.amplitudes.adjoint())
}

/// `e^{iθ(a,b)} = e^{−iΘ_a} e^{+iΘ_b}`.
fn block_phase(phases: &[f64], a: usize, b: usize) -> Complex64 {
    Complex64::from_polar(1.0, phases[b] - phases[a])
}

fn momentum_trace(state: &TwoQubitState, phases: &[f64]) -> Result<SpinDensityMatrix> {
    state.check_normalized()?;
    let idx: Vec<usize> = (0..state.len()).collect();
    let blocks = ordered_map(&idx, |&a| {
        let pair = &state.pairs[a];
        pair.amplitudes * pair.amplitudes.adjoint() * (block_phase(phases, a, a) * pair.weight)
    });
    let mut acc = [[crate::sum::NeumaierSum::new(); 8]; 4];
    for b in &blocks {
        for i in 0..4 {
            for j in 0..4 {
                acc[i][2 * j].add(b[(i, j)].re);
                acc[i][2 * j + 1].add(b[(i, j)].im);
            }
        }
    }
    let m = SpinMatrix::from_fn(|i, j| Complex64::new(acc[i][2 * j].value(), acc[i][2 * j + 1].value()));
    SpinDensityMatrix::new(m)
}

/// `ρ_free = Σ_a w_a S(a, a)`.
pub fn reduce_spin_free(state: &TwoQubitState) -> Result<SpinDensityMatrix> {
    momentum_trace(state, &vec![0.0; state.len()])
}

/// Momentum trace of the dressed joint matrix. Only the `a = a` blocks enter,
/// each carrying `e^{−iΘ_a + iΘ_a}`.
pub fn reduce_spin_dressed(state: &TwoQubitState, phases: &DressedPhaseAssignment) -> Result<SpinDensityMatrix> {
    phases.check_matches(state)?;
    momentum_trace(state, &phases.phases)
}

/// Full momentum ⊗ spin density matrix of a small grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMatrix {
    pairs: usize,
    data: DMatrix<Complex64>,
    theta: DMatrix<f64>,
}

impl JointMatrix {
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// The `(4N)×(4N)` matrix, pair-major then spin.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// `θ(a, b) = Θ_b − Θ_a` as applied to block `(a, b)`.
    pub fn theta(&self, a: usize, b: usize) -> f64 {
        self.theta[(a, b)]
    }

    pub fn block(&self, a: usize, b: usize) -> SpinMatrix {
        SpinMatrix::from_fn(|i, j| self.data[(4 * a + i, 4 * b + j)])
    }

    /// Explicit partial trace over momenta.
    pub fn momentum_trace(&self) -> SpinMatrix {
        let mut m = SpinMatrix::zeros();
        for a in 0..self.pairs {
            m += self.block(a, a);
        }
        m
    }
}

/// Builds `sqrt(w_a w_b) e^{iθ(a,b)} S(a, b)` for every pair of grid points.
pub fn joint_matrix_with_phases(state: &TwoQubitState, phases: &DressedPhaseAssignment) -> Result<JointMatrix> {
    phases.check_matches(state)?;
    let n = state.len();
    if n > JOINT_PAIR_LIMIT {
        return Err(Error::SizeLimit {
            what: "joint matrix blocks",
            got: n * n,
            limit: JOINT_PAIR_LIMIT * JOINT_PAIR_LIMIT,
        });
    }
    let ph = &phases.phases;
    let mut data = DMatrix::<Complex64>::zeros(4 * n, 4 * n);
    let mut theta = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let (pa, pb) = (&state.pairs[a], &state.pairs[b]);
            theta[(a, b)] = ph[b] - ph[a];
            let s = pa.amplitudes * pb.amplitudes.adjoint() * (block_phase(ph, a, b) * (pa.weight * pb.weight).sqrt());
            data.view_mut((4 * a, 4 * b), (4, 4)).copy_from(&s);
        }
    }
    Ok(JointMatrix { pairs: n, data, theta })
}
