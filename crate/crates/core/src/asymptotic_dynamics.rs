//! Large-time behaviour of the interaction terms.
//!
//! The two groups of terms in the interaction Hamiltonian oscillate in time
//! with phases
//!
//! - pair creation/annihilation: `Φ₁(k) = E(p⃗) + E(p⃗+k⃗) + |k⃗|`,
//! - scattering, emission branch: `Φ₂(k) = E(p⃗+k⃗) − E(p⃗) − |k⃗|`.
//!
//! Smearing `e^{iΦt}` against a smooth envelope `g(k)` turns the weak-limit
//! statements into ordinary integrals: group 1 has no stationary point and
//! decays, group 2 is stationary along soft photons collinear with the
//! fermion and survives.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{FourVector, OnShellMomentum, ThreeVector};
use crate::quadrature::GaussLegendre;
use crate::sum::{ordered_map, sum, sum_complex};
use crate::Coupling;

/// Which group of interaction terms an oscillatory integral belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermGroup {
    /// `b†d†`, `bd` and friends.
    PairCreation,
    /// `b†b`, `d†d`.
    Scattering,
}

impl TermGroup {
    pub const ALL: [TermGroup; 2] = [TermGroup::PairCreation, TermGroup::Scattering];

    pub fn index(self) -> u8 {
        match self {
            TermGroup::PairCreation => 1,
            TermGroup::Scattering => 2,
        }
    }
}

impl fmt::Display for TermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermGroup::PairCreation => "pair_creation",
            TermGroup::Scattering => "scattering",
        })
    }
}

fn energy(p: ThreeVector) -> f64 {
    (p.norm_sqr() + 1.0).sqrt()
}

/// `E(p⃗+k⃗) − E(p⃗)` without cancellation.
fn energy_shift(p: ThreeVector, k: ThreeVector) -> f64 {
    let num = 2.0 * p.dot(&k) + k.norm_sqr();
    num / (energy(p + k) + energy(p))
}

/// `Φ_group(k)` for a unit-mass fermion of momentum `p`.
pub fn phase(group: TermGroup, p: ThreeVector, k: ThreeVector) -> f64 {
    match group {
        TermGroup::PairCreation => energy(p) + energy(p + k) + k.norm(),
        TermGroup::Scattering => energy_shift(p, k) - k.norm(),
    }
}

/// Gaussian envelope in momentum space, elongated along its centre.
///
/// `g(k) ∝ exp[−(k∥ − |K|)²/2σ∥² − k⊥²/2σ⊥²]`, with `∥` measured along `K̂`
/// (along `ẑ` when `K = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianEnvelope {
    center: ThreeVector,
    width_parallel: f64,
    width_perp: f64,
}

impl GaussianEnvelope {
    pub fn new(center: impl Into<ThreeVector>, width_parallel: f64, width_perp: f64) -> Result<Self> {
        let center = center.into();
        if !center.is_finite() {
            return Err(Error::InvalidParameter("envelope centre must be finite".into()));
        }
        for w in [width_parallel, width_perp] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "envelope widths must be positive, got {w}"
                )));
            }
        }
        Ok(Self {
            center,
            width_parallel,
            width_perp,
        })
    }

    pub fn isotropic(center: impl Into<ThreeVector>, width: f64) -> Result<Self> {
        Self::new(center, width, width)
    }

    pub fn center(&self) -> ThreeVector {
        self.center
    }

    pub fn width_parallel(&self) -> f64 {
        self.width_parallel
    }

    pub fn width_perp(&self) -> f64 {
        self.width_perp
    }

    pub fn axis(&self) -> ThreeVector {
        self.center.unit().unwrap_or(ThreeVector::new(0.0, 0.0, 1.0))
    }

    /// Normalised density on all of ℝ³.
    pub fn density(&self, k: ThreeVector) -> f64 {
        let axis = self.axis();
        let kpar = k.dot(&axis);
        let kperp2 = (k - axis * kpar).norm_sqr();
        let (sl, sp) = (self.width_parallel, self.width_perp);
        let norm = (2.0 * PI).powf(1.5) * sl * sp * sp;
        (-(kpar - self.center.norm()).powi(2) / (2.0 * sl * sl) - kperp2 / (2.0 * sp * sp)).exp() / norm
    }
}

/// One smeared oscillatory term: `∫d³k g(k) e^{iΦ_group(k) t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatoryTermSpec {
    pub group: TermGroup,
    pub momentum: ThreeVector,
    pub envelope: GaussianEnvelope,
    pub time: f64,
}

impl OscillatoryTermSpec {
    pub fn new(group: TermGroup, momentum: impl Into<ThreeVector>, envelope: GaussianEnvelope, time: f64) -> Self {
        Self {
            group,
            momentum: momentum.into(),
            envelope,
            time,
        }
    }

    pub fn at_time(&self, time: f64) -> Self {
        Self { time, ..*self }
    }
}

/// Knobs for [`oscillatory_integral_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryOptions {
    /// Largest allowed `t·ΔΦ` across one cell.
    pub max_phase_step: f64,
    /// Gauss–Legendre nodes per cell.
    pub order: usize,
    /// Envelope truncation in units of its width.
    pub span: f64,
    /// Cells per dimension before any phase refinement.
    pub min_cells: usize,
    pub max_depth: u32,
}

impl Default for OscillatoryOptions {
    fn default() -> Self {
        Self {
            max_phase_step: PI / 4.0,
            order: 8,
            span: 8.0,
            min_cells: 16,
            max_depth: 40,
        }
    }
}

type Cell = (f64, f64);

/// Bisects `[a, b]` (pre-split into `min_cells`) until `t·variation` is below
/// the step on every cell. Cells come back in ascending order.
fn adapt_cells(
    a: f64,
    b: f64,
    min_cells: usize,
    t: f64,
    opts: &OscillatoryOptions,
    variation: &dyn Fn(f64, f64) -> f64,
) -> Result<Vec<Cell>> {
    fn split(
        lo: f64,
        hi: f64,
        depth: u32,
        t: f64,
        opts: &OscillatoryOptions,
        variation: &dyn Fn(f64, f64) -> f64,
        out: &mut Vec<Cell>,
    ) -> Result<()> {
        let dv = t * variation(lo, hi);
        if !dv.is_finite() {
            return Err(Error::Quadrature(format!("non-finite phase on [{lo}, {hi}]")));
        }
        if dv <= opts.max_phase_step {
            out.push((lo, hi));
            return Ok(());
        }
        if depth >= opts.max_depth {
            return Err(Error::Quadrature(format!(
                "phase still varies by {dv:.3} rad on [{lo:e}, {hi:e}] at depth {depth}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        split(lo, mid, depth + 1, t, opts, variation, out)?;
        split(mid, hi, depth + 1, t, opts, variation, out)
    }

    let mut out = Vec::new();
    let h = (b - a) / min_cells as f64;
    for i in 0..min_cells {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == min_cells { b } else { lo + h };
        split(lo, hi, 0, t, opts, variation, &mut out)?;
    }
    Ok(out)
}

fn nodes_of(cells: &[Cell], rule: &GaussLegendre) -> Vec<(f64, f64)> {
    cells.iter().flat_map(|&(lo, hi)| rule.mapped(lo, hi)).collect()
}

/// Spread of `phi` over nine equally spaced points of `[lo, hi]`.
fn spread(lo: f64, hi: f64, phi: impl Fn(f64) -> f64) -> f64 {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..=8 {
        let v = phi(lo + (hi - lo) * j as f64 / 8.0);
        min = min.min(v);
        max = max.max(v);
    }
    max - min
}

/// Cylindrical frame about the envelope axis.
struct Frame {
    axis: ThreeVector,
    e1: ThreeVector,
    e2: ThreeVector,
}

impl Frame {
    fn point(&self, kpar: f64, kperp: f64, phi: f64) -> ThreeVector {
        self.axis * kpar + (self.e1 * phi.cos() + self.e2 * phi.sin()) * kperp
    }
}

/// `∫d³k g(k) e^{iΦ(k)t}` with `g` normalised to one on the quadrature.
pub fn oscillatory_integral(spec: &OscillatoryTermSpec) -> Result<Complex64> {
    oscillatory_integral_with(spec, &OscillatoryOptions::default())
}

pub fn oscillatory_integral_with(spec: &OscillatoryTermSpec, opts: &OscillatoryOptions) -> Result<Complex64> {
    if !(spec.time.is_finite() && spec.time >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "oscillatory integral needs t ≥ 0, got {}",
            spec.time
        )));
    }
    if !spec.momentum.is_finite() {
        return Err(Error::InvalidParameter("fermion momentum must be finite".into()));
    }
    if opts.order == 0 || opts.min_cells == 0 || !(opts.span > 0.0) || !(opts.max_phase_step > 0.0) {
        return Err(Error::InvalidParameter(format!("bad oscillatory options {opts:?}")));
    }
    let env = &spec.envelope;
    let axis = env.axis();
    let (e1, e2) = axis.orthonormal_pair();
    let frame = Frame { axis, e1, e2 };
    let p = spec.momentum;
    let t = spec.time;
    let group = spec.group;
    let rule = GaussLegendre::new(opts.order)?;

    let k0 = env.center.norm();
    let (sl, sp) = (env.width_parallel, env.width_perp);
    let (par_lo, par_hi) = (k0 - opts.span * sl, k0 + opts.span * sl);
    let perp_hi = opts.span * sp;
    let axisymmetric = p.cross(&axis).norm() <= 1e-15 * p.norm().max(1.0);

    let g_par = |x: f64| (-(x - k0).powi(2) / (2.0 * sl * sl)).exp();
    let g_perp = |r: f64| r * (-(r * r) / (2.0 * sp * sp)).exp();
    let ph = |kpar: f64, kperp: f64, phi: f64| phase(group, p, frame.point(kpar, kperp, phi));

    // ∫g on the untruncated-by-phase cell structure, so that t = 0 gives 1
    let norm = {
        let par = nodes_of(
            &adapt_cells(par_lo, par_hi, opts.min_cells, 0.0, opts, &|_, _| 0.0)?,
            &rule,
        );
        let perp = nodes_of(
            &adapt_cells(0.0, perp_hi, opts.min_cells, 0.0, opts, &|_, _| 0.0)?,
            &rule,
        );
        sum(par.iter().map(|&(x, w)| w * g_par(x))) * sum(perp.iter().map(|&(r, w)| w * g_perp(r))) * 2.0 * PI
    };

    let azimuths: [f64; 4] = [0.0, 0.5 * PI, PI, 1.5 * PI];
    let perp_samples: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 4.0, opts.span].iter().map(|s| s * sp).collect();

    let par_cells = adapt_cells(par_lo, par_hi, opts.min_cells, t, opts, &|lo, hi| {
        let mut worst = 0.0f64;
        for &r in &perp_samples {
            for &phi in if axisymmetric { &azimuths[..1] } else { &azimuths[..] } {
                worst = worst.max(spread(lo, hi, |x| ph(x, r, phi)));
            }
        }
        worst
    })?;
    let par_nodes = nodes_of(&par_cells, &rule);

    let slices = ordered_map(&par_nodes, |&(kpar, wpar)| -> Result<Complex64> {
        let perp_cells = adapt_cells(0.0, perp_hi, opts.min_cells, t, opts, &|lo, hi| {
            if axisymmetric {
                spread(lo, hi, |r| ph(kpar, r, 0.0))
            } else {
                azimuths
                    .iter()
                    .map(|&phi| spread(lo, hi, |r| ph(kpar, r, phi)))
                    .fold(0.0, f64::max)
            }
        })?;
        let mut terms = Vec::new();
        for (kperp, wperp) in nodes_of(&perp_cells, &rule) {
            let weight = wpar * g_par(kpar) * wperp * g_perp(kperp);
            let angular = if axisymmetric {
                Complex64::from_polar(2.0 * PI, ph(kpar, kperp, 0.0) * t)
            } else {
                // periodic integrand: trapezoid, sized so each step turns the phase by < π/4
                let turn = t * spread(0.0, 2.0 * PI, |phi| ph(kpar, kperp, phi));
                let n = ((turn / opts.max_phase_step).ceil() as usize)
                    .max(8)
                    .next_multiple_of(4);
                let h = 2.0 * PI / n as f64;
                sum_complex((0..n).map(|j| Complex64::from_polar(h, ph(kpar, kperp, j as f64 * h) * t)))
            };
            terms.push(angular * weight);
        }
        Ok(sum_complex(terms))
    });
    let mut total = Vec::with_capacity(slices.len());
    for s in slices {
        total.push(s?);
    }
    let value = sum_complex(total) / norm;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Quadrature("oscillatory integral is not finite".into()));
    }
    Ok(value)
}

/// `I(t)` for every `t` in `times`, in order.
pub fn stationary_sweep(spec: &OscillatoryTermSpec, times: &[f64]) -> Result<Vec<(f64, Complex64)>> {
    times
        .iter()
        .map(|&t| oscillatory_integral(&spec.at_time(t)).map(|v| (t, v)))
        .collect()
}

/// Writes `t,group,re,im,abs` rows.
pub fn write_sweep_csv<W: Write>(mut out: W, rows: &[(f64, TermGroup, Complex64)]) -> io::Result<()> {
    writeln!(out, "t,group,re,im,abs")?;
    for (t, g, z) in rows {
        writeln!(out, "{t:e},{},{:e},{:e},{:e}", g.index(), z.re, z.im, z.norm())?;
    }
    Ok(())
}

/// `|E(p⃗+k⃗) − E(p⃗) − k⃗·p⃗/p₀|`: the error of the linearised energy shift.
pub fn phase_expansion_residual(p: impl Into<ThreeVector>, k: impl Into<ThreeVector>) -> Result<f64> {
    let (p, k) = (p.into(), k.into());
    if !(p.is_finite() && k.is_finite()) {
        return Err(Error::InvalidParameter("momenta must be finite".into()));
    }
    if k.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "expansion needs |k| < m, got |k| = {}",
            k.norm()
        )));
    }
    let e = energy(p);
    let s = energy(p + k) + e;
    let pk = p.dot(&k);
    let k2 = k.norm_sqr();
    Ok(((e * k2 - pk * (2.0 * pk + k2) / s) / (s * e)).abs())
}

/// `(1 + |v⃗|)²|k⃗|²/2m`, an upper bound on [`phase_expansion_residual`].
pub fn expansion_bound(p: impl Into<ThreeVector>, k: impl Into<ThreeVector>) -> f64 {
    let (p, k) = (p.into(), k.into());
    let v = p.norm() / energy(p);
    (1.0 + v).powi(2) * k.norm_sqr() / 2.0
}

/// Eigenvalue of the asymptotic current on a multi-fermion momentum state:
/// `Σ_j e (p_jμ/p_j0) e^{−i k·p_j t/p_j0}`, index lowered.
pub fn current_eigenvalue(
    momenta: &[OnShellMomentum],
    k: &FourVector,
    t: f64,
    coupling: Coupling,
) -> Result<[Complex64; 4]> {
    if k.time() <= 0.0 || k.dot(k).abs() > 1e-12 * k.time().powi(2) {
        return Err(Error::InvalidParameter(format!(
            "photon momentum must be null with k₀ > 0, got {:?}",
            k.0
        )));
    }
    let e = coupling.charge();
    let mut j = [Complex64::new(0.0, 0.0); 4];
    for p in momenta {
        let p4 = p.four_vector();
        let p0 = p4.time();
        let phase = Complex64::from_polar(1.0, -k.dot(&p4) * t / p0);
        for (jm, pm) in j.iter_mut().zip(p4.lowered()) {
            *jm += phase * (e * pm / p0);
        }
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rest_spec(group: TermGroup, t: f64) -> OscillatoryTermSpec {
        OscillatoryTermSpec::new(group, [0.0; 3], GaussianEnvelope::isotropic([0.0; 3], 0.02).unwrap(), t)
    }

    #[test]
    fn t_zero_gives_envelope_mass() {
        for g in TermGroup::ALL {
            let v = oscillatory_integral(&rest_spec(g, 0.0)).unwrap();
            assert!((v - 1.0).norm() < 1e-12, "{v}");
        }
        let env = GaussianEnvelope::new([0.0, 0.02, 0.01], 0.003, 0.001).unwrap();
        let spec = OscillatoryTermSpec::new(TermGroup::Scattering, [0.3, 0.0, 0.1], env, 0.0);
        assert!((oscillatory_integral(&spec).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn quadrature_normalisation_matches_density() {
        let env = GaussianEnvelope::new([0.0, 0.0, 0.5], 0.1, 0.05).unwrap();
        let rule = GaussLegendre::new(24).unwrap();
        // axis is ẑ here
        let composite = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
            let h = (b - a) / 16.0;
            (0..16)
                .map(|i| rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, f))
                .sum::<f64>()
        };
        let total = composite(-0.3, 1.3, &|z| {
            composite(0.0, 0.4, &|r| 2.0 * PI * r * env.density(ThreeVector::new(r, 0.0, z)))
        });
        assert_relative_eq!(total, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn rest_frame_group_one_matches_radial_quadrature() {
        // isotropic envelope at the origin: I(t) = ∫4πk² g(k) e^{iΦ(k)t} dk
        let sigma = 0.02;
        let t = 200.0;
        let got = oscillatory_integral(&rest_spec(TermGroup::PairCreation, t)).unwrap();
        let rule = GaussLegendre::new(64).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        let cells = 400;
        let h = 8.0 * sigma / cells as f64;
        for c in 0..cells {
            for (k, w) in rule.mapped(c as f64 * h, (c + 1) as f64 * h) {
                let g = (-(k * k) / (2.0 * sigma * sigma)).exp() / (2.0 * PI * sigma * sigma).powf(1.5);
                let ph = 1.0 + (1.0 + k * k).sqrt() + k;
                acc += Complex64::from_polar(w * 4.0 * PI * k * k * g, ph * t);
            }
        }
        assert!((got - acc).norm() < 1e-9, "{got} vs {acc}");
    }

    #[test]
    fn axisymmetric_shortcut_agrees_with_full_azimuth() {
        let env = GaussianEnvelope::new([0.05, 0.0, 0.0], 0.01, 0.005).unwrap();
        let p = ThreeVector::new(0.8, 0.0, 0.0);
        let spec = OscillatoryTermSpec::new(TermGroup::Scattering, p, env, 300.0);
        let fast = oscillatory_integral(&spec).unwrap();
        // tilt p by a negligible amount to force the general path
        let tilted = OscillatoryTermSpec {
            momentum: ThreeVector::new(0.8, 1e-13, 0.0),
            ..spec
        };
        let slow = oscillatory_integral(&tilted).unwrap();
        assert!((fast - slow).norm() < 1e-10, "{fast} vs {slow}");
    }

    #[test]
    fn pair_creation_decays_at_rest() {
        let vals: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&t| {
                oscillatory_integral(&rest_spec(TermGroup::PairCreation, t))
                    .unwrap()
                    .norm()
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
        assert!(vals[2] / vals[0] < 0.1);
    }

    #[test]
    fn scattering_at_rest_has_no_stationary_point() {
        // Φ₂ ≈ −|k| near k = 0 for a fermion at rest
        let a = oscillatory_integral(&rest_spec(TermGroup::Scattering, 10.0))
            .unwrap()
            .norm();
        let b = oscillatory_integral(&rest_spec(TermGroup::Scattering, 1000.0))
            .unwrap()
            .norm();
        assert!(b / a < 0.1, "{a} {b}");
    }

    #[test]
    fn phase_of_scattering_is_stable_for_fast_fermions() {
        let p = ThreeVector::new(1000.0, 0.0, 0.0);
        let k = ThreeVector::new(0.01, 0.0, 0.0);
        // 50-digit reference value
        let exact = -4.999_946_250_578_118_7e-9;
        assert_relative_eq!(phase(TermGroup::Scattering, p, k), exact, max_relative = 1e-9);
    }

    #[test]
    fn expansion_residual_examples() {
        assert_eq!(phase_expansion_residual([0.3, 0.1, 0.0], [0.0; 3]).unwrap(), 0.0);
        let r = phase_expansion_residual([0.0; 3], [0.01, 0.0, 0.0]).unwrap();
        assert_relative_eq!(r, 5e-5, max_relative = 0.01);
        assert_relative_eq!(r, (1.0f64 + 1e-4).sqrt() - 1.0, max_relative = 1e-12);
        let ratios: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .windows(2)
            .map(|w| {
                let p = [0.2, -0.4, 0.5];
                let dir = ThreeVector::new(0.6, 0.0, 0.8);
                phase_expansion_residual(p, dir * w[0]).unwrap() / phase_expansion_residual(p, dir * w[1]).unwrap()
            })
            .collect();
        for q in ratios {
            assert!((q - 4.0).abs() < 0.05, "{q}");
        }
        assert!(matches!(
            phase_expansion_residual([0.0; 3], [1.0, 0.0, 0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn current_at_rest_is_temporal_pure_phase() {
        let c = Coupling::fine_structure();
        let p = OnShellMomentum::at_rest(1.0).unwrap();
        let k = FourVector::new(0.3, 0.0, 0.3, 0.0);
        for t in [0.0, 1.0, 57.0] {
            let j = current_eigenvalue(&[p], &k, t, c).unwrap();
            assert_relative_eq!(j[0].norm(), c.charge(), max_relative = 1e-15);
            assert!((j[0] - Complex64::from_polar(c.charge(), -0.3 * t)).norm() < 1e-15);
            assert!(j[1..].iter().all(|z| z.norm() == 0.0));
        }
        let zero = current_eigenvalue(&[p], &k, 3.0, Coupling::zero()).unwrap();
        assert!(zero.iter().all(|z| z.norm() == 0.0));
        assert!(current_eigenvalue(&[p], &FourVector::new(1.0, 0.0, 0.0, 0.5), 0.0, c).is_err());
    }

    #[test]
    fn current_is_additive() {
        let c = Coupling::fine_structure();
        let p = OnShellMomentum::unit_mass([0.4, -0.2, 0.9]).unwrap();
        let k = FourVector::new(0.5, 0.3, 0.0, 0.4);
        let one = current_eigenvalue(&[p], &k, 12.0, c).unwrap();
        let two = current_eigenvalue(&[p, p], &k, 12.0, c).unwrap();
        for (a, b) in one.iter().zip(&two) {
            assert!((2.0 * a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn sweep_csv_rows() {
        let rows = vec![(10.0, TermGroup::PairCreation, Complex64::new(0.5, 0.0))];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().nth(1).unwrap(), "1e1,1,5e-1,0e0,5e-1");
    }
}
