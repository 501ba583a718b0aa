#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use softdress::kinematics::{OnShellMomentum, ThreeVector};
use softdress::phase_factors::{kappa_cross_closed, PhaseConfig};
use softdress::qubit_states::{DressedPhaseAssignment, MomentumPair, SpinMatrix, TwoQubitState};
use softdress::{Complex64, Coupling};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng) -> ThreeVector {
    loop {
        let v = ThreeVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

pub fn cube(rng: &mut impl Rng, half: f64) -> ThreeVector {
    ThreeVector::new(
        rng.random_range(-half..half),
        rng.random_range(-half..half),
        rng.random_range(-half..half),
    )
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn momentum(rng: &mut impl Rng) -> OnShellMomentum {
    OnShellMomentum::unit_mass(cube(rng, 1.5)).unwrap()
}

pub fn random_state(rng: &mut impl Rng, max_pairs: usize) -> TwoQubitState {
    let n = rng.random_range(1..=max_pairs);
    let pairs = (0..n)
        .map(|_| {
            let amps = [complex(rng), complex(rng), complex(rng), complex(rng)];
            MomentumPair::new(momentum(rng), momentum(rng), rng.random_range(0.05..1.0), amps).unwrap()
        })
        .collect();
    TwoQubitState::normalized(pairs).unwrap()
}

/// Either physical self phases of a random configuration or arbitrary
/// large phases.
pub fn random_phases(rng: &mut impl Rng, state: &TwoQubitState) -> DressedPhaseAssignment {
    if rng.random_bool(0.5) {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let t0 = sign * rng.random_range(1.0..1e4);
        let t = t0 * rng.random_range(1.5..100.0);
        let x1 = cube(rng, 5.0);
        let x2 = cube(rng, 5.0);
        DressedPhaseAssignment::from_kinematics(state, x1, x2, t, t0, Coupling::fine_structure()).unwrap()
    } else {
        DressedPhaseAssignment::new((0..state.len()).map(|_| rng.random_range(-1e4..1e4)).collect()).unwrap()
    }
}

/// Collinear velocities along a random axis with `|Δv| > 0.05`, positions
/// in `[−5, 5]³`, `t₀ ∈ [10, 1000]`, `t/t₀ ∈ [2, 100]`.
pub fn random_collinear_config(rng: &mut impl Rng) -> PhaseConfig {
    let axis = unit_vector(rng);
    loop {
        let (a, b): (f64, f64) = (rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
        if (a - b).abs() <= 0.05 {
            continue;
        }
        let t0 = rng.random_range(10.0..1000.0);
        let t = t0 * rng.random_range(2.0..100.0);
        let cfg = PhaseConfig::new(
            axis * a,
            axis * b,
            cube(rng, 5.0),
            cube(rng, 5.0),
            t,
            t0,
            Coupling::fine_structure(),
        )
        .unwrap();
        return cfg;
    }
}

/// Like [`random_collinear_config`] but only configurations where the full
/// closed form of `κ₁₂` is defined.
pub fn random_closed_form_config(rng: &mut impl Rng) -> PhaseConfig {
    loop {
        let cfg = random_collinear_config(rng);
        if kappa_cross_closed(&cfg, false).is_ok() {
            return cfg;
        }
    }
}

/// `(1 − p) G G†/tr + p 𝟙/4` for a `4×rank` random complex `G`.
pub fn random_density(rng: &mut impl Rng) -> SpinMatrix {
    let rank = rng.random_range(1..=4);
    let mut m = SpinMatrix::zeros();
    for _ in 0..rank {
        let v = nalgebra::Vector4::from_fn(|_, _| complex(rng));
        m += v * v.adjoint();
    }
    let tr = m.trace();
    let p: f64 = rng.random_range(0.0..1.0);
    m / tr * Complex64::new(1.0 - p, 0.0) + SpinMatrix::identity() * Complex64::new(0.25 * p, 0.0)
}

/// Haar-ish random 2×2 unitary.
pub fn random_unitary2(rng: &mut impl Rng) -> nalgebra::Matrix2<Complex64> {
    let a = complex(rng);
    let b = complex(rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    nalgebra::Matrix2::new(a, -b.conj() * phase, b, a.conj() * phase)
}

pub fn kron2(a: &nalgebra::Matrix2<Complex64>, b: &nalgebra::Matrix2<Complex64>) -> SpinMatrix {
    SpinMatrix::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}
