//! Browser bindings. Each exported function returns a flat `Float64Array`
//! whose layout is documented on the plain Rust function it wraps.

use softdress::kinematics::OnShellMomentum;
use softdress::phase_factors::{
    cancellation_residual, kappa_cross_closed, kappa_cross_quadrature, CrossMethod, PhaseConfig,
};
use softdress::photon_modes::{
    cloud_amplitude_dressed, cloud_amplitude_w, soft_photon_number, GridSpec, PhotonModeGrid, Projection,
};
use softdress::qubit_states::{
    concurrence, negativity, reduce_spin_dressed, reduce_spin_free, DressedPhaseAssignment, MomentumPair, TwoQubitState,
};
use softdress::{Complex64, Coupling};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 200;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn log_points(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(lo > 0.0 && hi > lo && (2..=MAX_POINTS).contains(&n)) {
        return Err(format!(
            "need 0 < lo < hi and 2 ≤ n ≤ {MAX_POINTS}; got lo = {lo}, hi = {hi}, n = {n}"
        ));
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    Ok((0..n).map(|i| lo * (step * i as f64).exp()).collect())
}

/// Cross phase against `t₀` at fixed `t/t₀`, particles moving along `x̂`
/// with speeds `v1`, `v2` and particle 1 offset by `b` across the line.
///
/// Rows of `[t0, kappa12_quadrature, kappa12_asymptotic, residual]`, the
/// residual being `|e^{iϕ − iκ₁₂} − 1|` with the quadrature `κ₁₂`.
pub fn phase_sweep(
    v1: f64,
    v2: f64,
    b: f64,
    ratio: f64,
    t0_min: f64,
    t0_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let p1 = OnShellMomentum::from_velocity(1.0, [v1, 0.0, 0.0]).map_err(err)?;
    let p2 = OnShellMomentum::from_velocity(1.0, [v2, 0.0, 0.0]).map_err(err)?;
    let mut out = Vec::with_capacity(4 * n);
    for t0 in log_points(t0_min, t0_max, n)? {
        let cfg = PhaseConfig::from_momenta(
            &p1,
            &p2,
            [0.0, b, 0.0],
            [0.0; 3],
            ratio * t0,
            t0,
            Coupling::fine_structure(),
        )
        .map_err(err)?;
        out.extend([
            t0,
            kappa_cross_quadrature(&cfg).map_err(err)?,
            kappa_cross_closed(&cfg, true).map_err(err)?,
            cancellation_residual(&cfg, &p1, &p2, CrossMethod::Quadrature).map_err(err)?,
        ]);
    }
    Ok(out)
}

/// Transverse soft-photon number of the undressed and dressed clouds of two
/// fermions moving along `ẑ` with speeds `v1`, `v2`, on a coarse grid.
///
/// Rows of `[lambda, n_undressed, n_dressed]`.
pub fn soft_photon_counts(v1: f64, v2: f64, lambda_min: f64, lambda_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let p1 = OnShellMomentum::from_velocity(1.0, [0.0, 0.0, v1]).map_err(err)?;
    let p2 = OnShellMomentum::from_velocity(1.0, [0.0, 0.0, v2]).map_err(err)?;
    let c = Coupling::fine_structure();
    let spec = GridSpec {
        n_radial: 16,
        n_polar: 12,
        n_azimuth: 12,
        ..GridSpec::default()
    };
    let mut out = Vec::with_capacity(3 * n);
    for lambda in log_points(lambda_min, lambda_max, n)? {
        let grid = PhotonModeGrid::new(spec.with_ir_cutoff(lambda)).map_err(err)?;
        out.extend([
            lambda,
            soft_photon_number(&cloud_amplitude_w(&p1, &p2, 1.0, &grid, c), Projection::Transverse),
            soft_photon_number(
                &cloud_amplitude_dressed(&p1, &p2, 1.0, &grid, c),
                Projection::Transverse,
            ),
        ]);
    }
    Ok(out)
}

/// Two momentum pairs carrying `cos θ|↑↓⟩ ± sin θ|↓↑⟩` with weights
/// `1 − mix` and `mix`, dressed at times `t`, `t0`.
///
/// Returns 16 real parts and 16 imaginary parts of `ρ_free` (row-major),
/// then `max|ρ_dressed − ρ_free|`, concurrence and negativity.
pub fn spin_density(theta: f64, mix: f64, t: f64, t0: f64) -> Result<Vec<f64>, String> {
    if !(0.0..1.0).contains(&mix) {
        return Err(format!("mix must lie in [0, 1), got {mix}"));
    }
    let (s, c) = theta.sin_cos();
    let z = |x: f64| Complex64::new(x, 0.0);
    let p = |v: [f64; 3]| OnShellMomentum::unit_mass(v).map_err(err);
    let mut pairs = vec![MomentumPair::new(
        p([0.3, 0.0, 0.0])?,
        p([-0.3, 0.1, 0.0])?,
        1.0 - mix,
        [z(0.0), z(c), z(s), z(0.0)],
    )
    .map_err(err)?];
    if mix > 0.0 {
        pairs.push(
            MomentumPair::new(
                p([0.0, 0.0, 0.8])?,
                p([0.0, 0.5, -0.4])?,
                mix,
                [z(0.0), z(c), z(-s), z(0.0)],
            )
            .map_err(err)?,
        );
    }
    let state = TwoQubitState::normalized(pairs).map_err(err)?;
    let phases = DressedPhaseAssignment::from_kinematics(
        &state,
        [1.0, 0.0, 0.0].into(),
        [0.0, 2.0, 0.0].into(),
        t,
        t0,
        Coupling::fine_structure(),
    )
    .map_err(err)?;
    let free = reduce_spin_free(&state).map_err(err)?;
    let dressed = reduce_spin_dressed(&state, &phases).map_err(err)?;
    let m = free.matrix();
    let mut out: Vec<f64> = (0..16).map(|k| m[(k / 4, k % 4)].re).collect();
    out.extend((0..16).map(|k| m[(k / 4, k % 4)].im));
    out.extend([dressed.max_abs_diff(&free), concurrence(&free), negativity(&free)]);
    Ok(out)
}

#[wasm_bindgen(js_name = phaseSweep)]
pub fn phase_sweep_js(
    v1: f64,
    v2: f64,
    b: f64,
    ratio: f64,
    t0_min: f64,
    t0_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    phase_sweep(v1, v2, b, ratio, t0_min, t0_max, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = softPhotonCounts)]
pub fn soft_photon_counts_js(
    v1: f64,
    v2: f64,
    lambda_min: f64,
    lambda_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    soft_photon_counts(v1, v2, lambda_min, lambda_max, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = spinDensity)]
pub fn spin_density_js(theta: f64, mix: f64, t: f64, t0: f64) -> Result<Vec<f64>, JsValue> {
    spin_density(theta, mix, t, t0).map_err(|e| JsValue::from_str(&e))
}
