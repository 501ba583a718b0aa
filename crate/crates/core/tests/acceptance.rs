//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p softdress --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use softdress::asymptotic_dynamics::{
    oscillatory_integral, phase_expansion_residual, GaussianEnvelope, OscillatoryTermSpec, TermGroup,
};
use softdress::kinematics::{relative_velocity_3v, relative_velocity_invariant, OnShellMomentum, ThreeVector};
use softdress::phase_factors::{
    cancellation_residual, kappa_cross_closed, kappa_cross_quadrature, kappa_self_closed, kappa_self_quadrature,
    CrossMethod, Particle, PhaseConfig,
};
use softdress::photon_modes::{
    cloud_amplitude_dressed, cloud_amplitude_w, coherent_overlap, fit_log_divergence, max_gauge_residue,
    soft_photon_number, CloudAmplitude, GridSpec, PhotonModeGrid, Projection,
};
use softdress::qubit_states::{
    concurrence, entropy_of_spin_vector, negativity, reduce_spin_dressed, reduce_spin_free, SpinDensityMatrix,
    SpinVector,
};
use softdress::{Complex64, Coupling};

type Outcome = Result<String, String>;

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within_budget(elapsed: Duration, budget_s: f64, detail: String) -> Outcome {
    check(
        elapsed.as_secs_f64() < budget_s,
        format!("{detail}; {:.2} s (budget {budget_s} s)", elapsed.as_secs_f64()),
    )
}

fn headline_theorem() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(1);
    let (mut worst_rho, mut worst_measure) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let state = common::random_state(&mut rng, 50);
        let phases = common::random_phases(&mut rng, &state);
        let free = reduce_spin_free(&state).map_err(|e| e.to_string())?;
        let dressed = reduce_spin_dressed(&state, &phases).map_err(|e| e.to_string())?;
        worst_rho = worst_rho.max(free.max_abs_diff(&dressed));
        for (a, b) in [
            (concurrence(&free), concurrence(&dressed)),
            (negativity(&free), negativity(&dressed)),
            (free.purity(), dressed.purity()),
        ] {
            worst_measure = worst_measure.max((a - b).abs());
        }
    }
    let detail = format!("max|ρ_dressed − ρ_free| = {worst_rho:e}, max measure gap = {worst_measure:e}");
    check(worst_rho < 1e-14 && worst_measure < 1e-12, detail.clone())?;
    within_budget(start.elapsed(), 10.0, detail)
}

fn phase_cancellation() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let cfg = common::random_collinear_config(&mut rng);
        let p1 = OnShellMomentum::from_velocity(1.0, cfg.v1).map_err(|e| e.to_string())?;
        let p2 = OnShellMomentum::from_velocity(1.0, cfg.v2).map_err(|e| e.to_string())?;
        let r = cancellation_residual(&cfg, &p1, &p2, CrossMethod::Asymptotic).map_err(|e| e.to_string())?;
        worst = worst.max(r);
    }
    check(worst < 1e-12, format!("asymptotic residual {worst:e}"))?;

    let p1 = OnShellMomentum::at_rest(1.0).map_err(|e| e.to_string())?;
    let p2 = OnShellMomentum::from_velocity(1.0, [0.6, 0.0, 0.0]).map_err(|e| e.to_string())?;
    let mut sweep = Vec::new();
    for t0 in [1e3, 1e4, 1e5] {
        let cfg = PhaseConfig::from_momenta(
            &p1,
            &p2,
            [1.0, 0.5, 0.0],
            [0.0; 3],
            10.0 * t0,
            t0,
            Coupling::fine_structure(),
        )
        .map_err(|e| e.to_string())?;
        sweep.push(cancellation_residual(&cfg, &p1, &p2, CrossMethod::Quadrature).map_err(|e| e.to_string())?);
    }
    let decreasing = sweep.windows(2).all(|w| w[1] < w[0]);
    let detail = format!("asymptotic residual {worst:e}; quadrature sweep {}", sci(&sweep));
    check(decreasing && sweep[2] < 1e-3, detail.clone())?;
    within_budget(start.elapsed(), 30.0, detail)
}

fn closed_form_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(3);
    let (mut worst_self, mut worst_cross) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let cfg = common::random_closed_form_config(&mut rng);
        for which in [Particle::First, Particle::Second] {
            let q = kappa_self_quadrature(&cfg, which).map_err(|e| e.to_string())?;
            let c = kappa_self_closed(&cfg, which).map_err(|e| e.to_string())?;
            worst_self = worst_self.max(((q - c) / c).abs());
        }
        let q = kappa_cross_quadrature(&cfg).map_err(|e| e.to_string())?;
        let c = kappa_cross_closed(&cfg, false).map_err(|e| e.to_string())?;
        worst_cross = worst_cross.max(((q - c) / c).abs());
    }
    let detail = format!("self rel. gap {worst_self:e}, cross rel. gap {worst_cross:e}");
    check(worst_self < 1e-12 && worst_cross < 1e-6, detail.clone())?;
    within_budget(start.elapsed(), 60.0, detail)
}

fn gauge_residue() -> Outcome {
    let grid = PhotonModeGrid::new(GridSpec::default()).map_err(|e| e.to_string())?;
    let p1 = OnShellMomentum::unit_mass([0.3, -0.1, 0.2]).map_err(|e| e.to_string())?;
    let p2 = OnShellMomentum::unit_mass([-0.5, 0.4, 0.1]).map_err(|e| e.to_string())?;
    let residue = max_gauge_residue(&p1, &grid).max(max_gauge_residue(&p2, &grid));
    let dressed = cloud_amplitude_dressed(&p1, &p2, 25.0, &grid, Coupling::fine_structure());
    let n = soft_photon_number(&dressed, Projection::Transverse);
    let overlap = coherent_overlap(&dressed, &CloudAmplitude::zero(&grid)).map_err(|e| e.to_string())?;
    check(
        grid.len() >= 10_000 && residue < 1e-12 && n < 1e-10 && (overlap.norm() - 1.0).abs() < 1e-8,
        format!(
            "{} modes, max residue {residue:e}, dressed N_T = {n:e}, |⟨0|W′⟩| − 1 = {:e}",
            grid.len(),
            overlap.norm() - 1.0
        ),
    )
}

fn ir_structure() -> Outcome {
    let base = GridSpec::default();
    let p1 = OnShellMomentum::from_velocity(1.0, [0.0, 0.0, 0.5]).map_err(|e| e.to_string())?;
    let p2 = OnShellMomentum::from_velocity(1.0, [0.3, 0.0, -0.2]).map_err(|e| e.to_string())?;
    let number = |lambda: f64| -> Result<f64, String> {
        let grid = PhotonModeGrid::new(base.with_ir_cutoff(lambda)).map_err(|e| e.to_string())?;
        Ok(soft_photon_number(
            &cloud_amplitude_w(&p1, &p2, 1.0, &grid, Coupling::fine_structure()),
            Projection::Transverse,
        ))
    };
    let lambdas = [1e-3, 1e-4, 1e-5];
    let mut diffs = Vec::new();
    let mut numbers = Vec::new();
    for &l in &lambdas {
        let n = number(l)?;
        diffs.push(n - number(2.0 * l)?);
        numbers.push(n);
    }
    let mean = diffs.iter().sum::<f64>() / 3.0;
    let spread = diffs.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max) / mean;
    let fit = fit_log_divergence(&lambdas, &numbers).map_err(|e| e.to_string())?;
    check(
        spread < 0.01 && fit.slope > 0.0 && fit.r_squared > 0.99 && fit.max_residual_fraction < 0.01,
        format!(
            "N(λ) − N(2λ) = {} (spread {spread:.1e}); slope {:.6e}, R² = {:.12}",
            sci(&diffs),
            fit.slope,
            fit.r_squared
        ),
    )
}

fn stationary_phase() -> Outcome {
    let rest = GaussianEnvelope::isotropic([0.0; 3], 0.02).map_err(|e| e.to_string())?;
    let g1 = OscillatoryTermSpec::new(TermGroup::PairCreation, [0.0; 3], rest, 10.0);
    let early = oscillatory_integral(&g1).map_err(|e| e.to_string())?.norm();
    let late = oscillatory_integral(&g1.at_time(1e3))
        .map_err(|e| e.to_string())?
        .norm();

    let collinear = GaussianEnvelope::new([0.01, 0.0, 0.0], 0.002, 1e-5).map_err(|e| e.to_string())?;
    let g2 = OscillatoryTermSpec::new(TermGroup::Scattering, [1000.0, 0.0, 0.0], collinear, 1e3);
    let i3 = oscillatory_integral(&g2).map_err(|e| e.to_string())?;
    let i4 = oscillatory_integral(&g2.at_time(1e4)).map_err(|e| e.to_string())?;
    let cauchy = (i4 - i3).norm() / i4.norm();

    let p = ThreeVector::new(0.4, -0.3, 0.7);
    let dir = ThreeVector::new(0.0, 0.6, 0.8);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..=20)
        .map(|i| {
            let k = 1e-3 * 10f64.powf(i as f64 / 10.0);
            let r = phase_expansion_residual(p, dir * k).expect("|k| < m");
            (k.ln(), r.ln())
        })
        .unzip();
    let slope = (ys[20] - ys[0]) / (xs[20] - xs[0]);
    check(
        late / early < 0.1 && cauchy < 0.01 && (slope - 2.0).abs() < 0.05,
        format!(
            "group 1 |I(10³)|/|I(10)| = {:.3e}; group 2 Cauchy gap {cauchy:.3e} at |I| = {:.6}; residual slope {slope:.4}",
            late / early,
            i4.norm()
        ),
    )
}

fn kinematics_consistency() -> Outcome {
    let mut rng = common::rng(7);
    let (mut worst_u, mut worst_boost) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let axis = common::unit_vector(&mut rng);
        let v1 = axis * rng.random_range(-0.95..0.95);
        let v2 = axis * rng.random_range(-0.95..0.95);
        let p = OnShellMomentum::from_velocity(1.0, v1).map_err(|e| e.to_string())?;
        let q = OnShellMomentum::from_velocity(1.0, v2).map_err(|e| e.to_string())?;
        let inv = relative_velocity_invariant(&p, &q).map_err(|e| e.to_string())?;
        let three = relative_velocity_3v(v1, v2).map_err(|e| e.to_string())?;
        worst_u = worst_u.max((inv - three).abs());

        let beta = common::unit_vector(&mut rng) * rng.random_range(0.0..0.9);
        let (pb, qb) = (
            p.boosted(beta).map_err(|e| e.to_string())?,
            q.boosted(beta).map_err(|e| e.to_string())?,
        );
        let dot = p.four_vector().dot(&q.four_vector());
        let dot_b = pb.four_vector().dot(&qb.four_vector());
        let inv_b = relative_velocity_invariant(&pb, &qb).map_err(|e| e.to_string())?;
        worst_boost = worst_boost.max(((dot_b - dot) / dot).abs()).max((inv_b - inv).abs());
    }
    check(
        worst_u < 1e-12 && worst_boost < 1e-12,
        format!("invariant vs 3-velocity gap {worst_u:e}; boost gap {worst_boost:e}"),
    )
}

fn measure_sanity() -> Outcome {
    let c = |re: f64| Complex64::new(re, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = SpinVector::from([c(0.0), c(s), c(-s), c(0.0)]);
    let rho = SpinDensityMatrix::pure(&singlet).map_err(|e| e.to_string())?;
    let (cs, ns, es) = (concurrence(&rho), negativity(&rho), entropy_of_spin_vector(&singlet));
    let product = SpinVector::from([c(0.6), c(0.8), c(0.0), c(0.0)]);
    let prho = SpinDensityMatrix::pure(&product).map_err(|e| e.to_string())?;
    let (cp, np, ep) = (concurrence(&prho), negativity(&prho), entropy_of_spin_vector(&product));

    let mut rng = common::rng(8);
    let mut disagreements = 0;
    let mut entangled = 0;
    for _ in 0..1000 {
        let m = common::random_density(&mut rng);
        let r = SpinDensityMatrix::new(m).map_err(|e| e.to_string())?;
        let (cc, nn) = (concurrence(&r) > 1e-12, negativity(&r) > 1e-12);
        entangled += cc as usize;
        disagreements += (cc != nn) as usize;
    }
    check(
        (cs - 1.0).abs() < 1e-12
            && (ns - 0.5).abs() < 1e-12
            && (es - 1.0).abs() < 1e-12
            && cp < 1e-12
            && np < 1e-12
            && ep < 1e-12
            && disagreements == 0,
        format!(
            "singlet C = {cs:.15}, N = {ns:.15}, S = {es:.15}; product {cp:e}/{np:e}/{ep:e}; \
             {disagreements} disagreements over 1000 ({entangled} entangled)"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("dressed and free spin density matrices coincide", headline_theorem),
        ("phase eigenvalue cancels the cross phase", phase_cancellation),
        ("closed forms match world-line quadrature", closed_form_oracle),
        ("dressed cloud is pure gauge on shell", gauge_residue),
        ("undressed photon number diverges logarithmically", ir_structure),
        ("stationary-phase classification", stationary_phase),
        ("relative velocity and boost consistency", kinematics_consistency),
        ("entanglement measure sanity", measure_sanity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {}: {name} ({detail}) [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {}: {name} ({detail}) [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
