use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use softdress::asymptotic_dynamics::{
    stationary_sweep, write_sweep_csv, GaussianEnvelope, OscillatoryTermSpec, TermGroup,
};
use softdress::kinematics::OnShellMomentum;
use softdress::phase_factors::{
    cancellation_residual, kappa_cross, kappa_cross_closed, kappa_cross_quadrature, phi_eigenvalue, write_phase_csv,
    CrossMethod, PhaseConfig, PhaseRow,
};
use softdress::photon_modes::{
    cloud_amplitude_dressed, cloud_amplitude_w, fit_log_divergence, soft_photon_number, LogFit, PhotonModeGrid,
    Projection,
};
use softdress::qubit_states::{
    read_state, reduce_spin_dressed, reduce_spin_free, write_density_csv, write_density_json, DressedPhaseAssignment,
    EntanglementSummary, MomentumPair, TwoQubitState,
};
use softdress::Coupling;

use crate::config::{EnvelopeRun, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub command: String,
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn below(command: &str, name: &str, value: f64, limit: f64) -> Self {
        Self {
            command: command.into(),
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    fn above(command: &str, name: &str, value: f64, limit: f64) -> Self {
        Self {
            command: command.into(),
            name: name.into(),
            value,
            limit,
            pass: value > limit,
        }
    }
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = out.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(out, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn coupling(cfg: &RunConfig) -> Result<Coupling> {
    Ok(Coupling::new(cfg.alpha)?)
}

fn phase_config(cfg: &RunConfig, t0: f64, t: f64) -> Result<PhaseConfig> {
    let ph = &cfg.phases;
    PhaseConfig::new(ph.v1, ph.v2, ph.x1, ph.x2, t, t0, coupling(cfg)?).with_context(|| {
        format!(
            "phase configuration v1 = {:?}, v2 = {:?}, t0 = {t0}, t = {t}",
            ph.v1, ph.v2
        )
    })
}

fn unit_momenta(v1: [f64; 3], v2: [f64; 3]) -> Result<(OnShellMomentum, OnShellMomentum)> {
    Ok((
        OnShellMomentum::from_velocity(1.0, v1).with_context(|| format!("velocity {v1:?}"))?,
        OnShellMomentum::from_velocity(1.0, v2).with_context(|| format!("velocity {v2:?}"))?,
    ))
}

/// `κ₁₂` by quadrature against the full closed form over the schedule.
pub fn phases(cfg: &RunConfig, out: &Path) -> Result<Vec<Check>> {
    let (p1, p2) = unit_momenta(cfg.phases.v1, cfg.phases.v2)?;
    let rows = cfg
        .phases
        .schedule()
        .par_iter()
        .map(|&(t0, t)| -> Result<PhaseRow> {
            let pc = phase_config(cfg, t0, t)?;
            let ctx = || {
                format!(
                    "κ₁₂ at t0 = {t0}, t = {t}, x1 = {:?}, x2 = {:?}",
                    cfg.phases.x1, cfg.phases.x2
                )
            };
            let quad = kappa_cross_quadrature(&pc).with_context(ctx)?;
            let closed = kappa_cross_closed(&pc, false).with_context(ctx)?;
            Ok(PhaseRow {
                t0,
                t,
                kappa12_quad: quad,
                kappa12_closed: closed,
                phi: phi_eigenvalue(&p1, &p2, t, t0, pc.coupling)?,
                residual: (quad - closed).abs() / closed.abs().max(f64::MIN_POSITIVE),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = create(out, "phases.csv")?;
    write_phase_csv(&mut w, &rows)?;
    w.flush()?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(vec![Check::below(
        "phases",
        "max relative gap, quadrature vs closed form",
        worst,
        cfg.phases.closed_form_tolerance,
    )])
}

/// `|e^{iϕ − iκ₁₂} − 1|` over the schedule.
pub fn cancellation(cfg: &RunConfig, out: &Path) -> Result<Vec<Check>> {
    let (p1, p2) = unit_momenta(cfg.phases.v1, cfg.phases.v2)?;
    let method = cfg.cancellation.method;
    let rows = cfg
        .phases
        .schedule()
        .par_iter()
        .map(|&(t0, t)| -> Result<PhaseRow> {
            let pc = phase_config(cfg, t0, t)?;
            let ctx = || format!("cancellation at t0 = {t0}, t = {t}");
            Ok(PhaseRow {
                t0,
                t,
                kappa12_quad: kappa_cross_quadrature(&pc).with_context(ctx)?,
                kappa12_closed: kappa_cross(&pc, method).with_context(ctx)?,
                phi: phi_eigenvalue(&p1, &p2, t, t0, pc.coupling)?,
                residual: cancellation_residual(&pc, &p1, &p2, method).with_context(ctx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = create(out, "cancellation.csv")?;
    write_phase_csv(&mut w, &rows)?;
    w.flush()?;

    let residuals: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Ok(match method {
        CrossMethod::Asymptotic => vec![Check::below(
            "cancellation",
            "max asymptotic residual",
            worst,
            cfg.tolerance,
        )],
        _ => {
            let rising = residuals.windows(2).filter(|w| w[1] > w[0]).count();
            vec![
                Check::below("cancellation", "residual increases along schedule", rising as f64, 0.0),
                Check::below(
                    "cancellation",
                    "last residual",
                    *residuals.last().expect("schedule is non-empty"),
                    cfg.cancellation.sweep_tolerance,
                ),
            ]
        }
    })
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Result<TwoQubitState> {
    let momentum = |rng: &mut ChaCha8Rng| {
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.5..1.5));
        OnShellMomentum::unit_mass(p)
    };
    let pairs = (0..n)
        .map(|_| {
            let p1 = momentum(rng)?;
            let p2 = momentum(rng)?;
            let w = rng.random_range(0.05..1.0);
            let amps: [Complex64; 4] =
                std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            MomentumPair::new(p1, p2, w, amps)
        })
        .collect::<softdress::Result<Vec<_>>>()?;
    Ok(TwoQubitState::normalized(pairs)?)
}

#[derive(Serialize)]
struct SpinReport {
    seed: u64,
    source: String,
    pairs: usize,
    max_diff: f64,
    free: EntanglementSummary,
    dressed: EntanglementSummary,
}

/// Free and dressed reduced spin density matrices.
pub fn spin_rho(cfg: &RunConfig, out: &Path) -> Result<Vec<Check>> {
    let sp = &cfg.spin;
    let (state, source) = match &sp.state {
        Some(p) => {
            let path = cfg.resolve(p);
            let f = File::open(&path).with_context(|| format!("opening state file {}", path.display()))?;
            let state =
                read_state(std::io::BufReader::new(f)).with_context(|| format!("reading {}", path.display()))?;
            (state, p.display().to_string())
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (
                random_state(&mut rng, sp.random_pairs)?,
                format!("random ({} pairs)", sp.random_pairs),
            )
        }
    };
    let phases =
        DressedPhaseAssignment::from_kinematics(&state, sp.x1.into(), sp.x2.into(), sp.t, sp.t0, coupling(cfg)?)
            .with_context(|| {
                format!(
                    "dressing phases at x1 = {:?}, x2 = {:?}, t = {}, t0 = {}",
                    sp.x1, sp.x2, sp.t, sp.t0
                )
            })?;
    let free = reduce_spin_free(&state)?;
    let dressed = reduce_spin_dressed(&state, &phases)?;

    for (name, rho) in [("rho_free", &free), ("rho_dressed", &dressed)] {
        let mut w = create(out, &format!("{name}.json"))?;
        write_density_json(rho, &mut w)?;
        writeln!(w)?;
        w.flush()?;
        let mut w = create(out, &format!("{name}.csv"))?;
        write_density_csv(rho, &mut w)?;
        w.flush()?;
    }

    let report = SpinReport {
        seed: cfg.seed,
        source,
        pairs: state.len(),
        max_diff: dressed.max_abs_diff(&free),
        free: EntanglementSummary::of(&free, Some(&state)),
        dressed: EntanglementSummary::of(&dressed, Some(&state)),
    };
    write_json(out, "measures.json", &report)?;

    let measure_gap = [
        (report.free.concurrence - report.dressed.concurrence).abs(),
        (report.free.negativity - report.dressed.negativity).abs(),
        (report.free.purity - report.dressed.purity).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(vec![
        Check::below(
            "spin-rho",
            "max |rho_dressed - rho_free|",
            report.max_diff,
            cfg.tolerance,
        ),
        Check::below("spin-rho", "max measure gap", measure_gap, cfg.tolerance),
    ])
}

#[derive(Serialize)]
struct SoftcountReport {
    undressed: LogFit,
    max_dressed: f64,
}

/// Transverse photon numbers of the undressed and dressed clouds against
/// the infrared cutoff.
pub fn softcount(cfg: &RunConfig, out: &Path) -> Result<Vec<Check>> {
    let sc = &cfg.softcount;
    let (p1, p2) = unit_momenta(sc.v1, sc.v2)?;
    let c = coupling(cfg)?;
    let rows = sc
        .ir_cutoffs
        .par_iter()
        .map(|&lambda| -> Result<(f64, f64, f64)> {
            let grid = PhotonModeGrid::new(sc.grid.with_ir_cutoff(lambda))
                .with_context(|| format!("photon grid with infrared cutoff {lambda}"))?;
            let bare = soft_photon_number(&cloud_amplitude_w(&p1, &p2, sc.t, &grid, c), Projection::Transverse);
            let dressed = soft_photon_number(
                &cloud_amplitude_dressed(&p1, &p2, sc.t, &grid, c),
                Projection::Transverse,
            );
            Ok((lambda, bare, dressed))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut w = create(out, "softcount.csv")?;
    writeln!(w, "lambda,n_undressed,n_dressed")?;
    for (l, n, d) in &rows {
        writeln!(w, "{l:e},{n:e},{d:e}")?;
    }
    w.flush()?;

    let numbers: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let fit = fit_log_divergence(&sc.ir_cutoffs, &numbers).context("fitting the logarithmic divergence")?;
    let max_dressed = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    write_json(
        out,
        "softcount.json",
        &SoftcountReport {
            undressed: fit,
            max_dressed,
        },
    )?;
    Ok(vec![
        Check::above("softcount", "undressed log slope", fit.slope, 0.0),
        Check::above("softcount", "undressed fit R^2", fit.r_squared, sc.min_r_squared),
        Check::below("softcount", "max dressed photon number", max_dressed, sc.max_dressed),
    ])
}

fn sweep(group: TermGroup, run: &EnvelopeRun) -> Result<Vec<(f64, TermGroup, Complex64)>> {
    let env = GaussianEnvelope::new(run.center, run.width_parallel, run.width_perp)
        .with_context(|| format!("{group} envelope centred at {:?}", run.center))?;
    let spec = OscillatoryTermSpec::new(group, run.momentum, env, run.times[0]);
    let rows = stationary_sweep(&spec, &run.times).with_context(|| format!("{group} sweep"))?;
    Ok(rows.into_iter().map(|(t, z)| (t, group, z)).collect())
}

/// `|I(t)|` of both interaction-term groups.
pub fn stationary(cfg: &RunConfig, out: &Path) -> Result<Vec<Check>> {
    let st = &cfg.stationary;
    let (g1, g2) = rayon::join(
        || sweep(TermGroup::PairCreation, &st.pair_creation),
        || sweep(TermGroup::Scattering, &st.scattering),
    );
    let (g1, g2) = (g1?, g2?);
    let mut w = create(out, "stationary.csv")?;
    write_sweep_csv(&mut w, &[g1.clone(), g2.clone()].concat())?;
    w.flush()?;

    let decay = g1.last().expect("validated").2.norm() / g1[0].2.norm();
    let n = g2.len();
    let cauchy = (g2[n - 1].2 - g2[n - 2].2).norm() / g2[n - 1].2.norm();
    Ok(vec![
        Check::below(
            "stationary",
            "pair creation |I(last)|/|I(first)|",
            decay,
            st.max_decay_ratio,
        ),
        Check::below(
            "stationary",
            "scattering relative change over last step",
            cauchy,
            st.max_cauchy_gap,
        ),
    ])
}
