//! Discretised soft-photon phase space and coherent photon clouds.
//!
//! A cloud is carried as its coherent eigenvalue `f^μ(k)` on every mode of a
//! [`PhotonModeGrid`], i.e. the coefficient of `a_μ†(k)` in the exponent of
//! the asymptotic evolution operator. Operator-valued Fock states are never
//! built.
//!
//! The grid is a tensor product of
//! - Gauss–Legendre nodes in `ln|k⃗|` between the IR cutoff `λ` and the UV
//!   cutoff `Λ` (so `∫d³k |k|⁻³` is integrated exactly),
//! - Gauss–Legendre nodes in `cos θ`,
//! - uniformly spaced azimuths.
//!
//! Mode order is radial-major, then polar, then azimuth; every reduction
//! sums in that order.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{minkowski_dot, FourVector, OnShellMomentum, ThreeVector};
use crate::quadrature::GaussLegendre;
use crate::sum::{ordered_map, sum, sum_complex};
use crate::Coupling;

/// Default IR cutoff, in units of the fermion mass.
pub const DEFAULT_IR_CUTOFF: f64 = 1e-4;
/// Default UV cutoff; keeps every mode soft (`k ≪ m`).
pub const DEFAULT_UV_CUTOFF: f64 = 0.1;

/// Construction parameters of a [`PhotonModeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub ir_cutoff: f64,
    pub uv_cutoff: f64,
    pub n_radial: usize,
    pub n_polar: usize,
    pub n_azimuth: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            ir_cutoff: DEFAULT_IR_CUTOFF,
            uv_cutoff: DEFAULT_UV_CUTOFF,
            n_radial: 32,
            n_polar: 24,
            n_azimuth: 24,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.ir_cutoff, self.uv_cutoff);
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "photon cutoffs must satisfy 0 < λ < Λ, got λ = {lo}, Λ = {hi}"
            )));
        }
        for (name, n) in [
            ("n_radial", self.n_radial),
            ("n_polar", self.n_polar),
            ("n_azimuth", self.n_azimuth),
        ] {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 2, got {n}")));
            }
        }
        Ok(())
    }

    /// The same grid with every node count doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_radial: 2 * self.n_radial,
            n_polar: 2 * self.n_polar,
            n_azimuth: 2 * self.n_azimuth,
            ..*self
        }
    }

    pub fn with_ir_cutoff(&self, ir_cutoff: f64) -> Self {
        Self { ir_cutoff, ..*self }
    }
}

/// One photon mode: null momentum, `d³k` weight and two real transverse
/// polarisation 3-vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMode {
    pub k: FourVector,
    pub weight: f64,
    pub polarizations: [ThreeVector; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonModeGrid {
    spec: GridSpec,
    modes: Vec<PhotonMode>,
}

impl PhotonModeGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let radial = GaussLegendre::new(spec.n_radial)?;
        let polar = GaussLegendre::new(spec.n_polar)?;
        let dphi = 2.0 * PI / spec.n_azimuth as f64;

        let mut modes = Vec::with_capacity(spec.n_radial * spec.n_polar * spec.n_azimuth);
        for (u, wu) in radial.mapped(spec.ir_cutoff.ln(), spec.uv_cutoff.ln()) {
            let k = u.exp();
            // d³k = k³ d(ln k) dΩ
            let wk = wu * k * k * k;
            for (c, wc) in polar.mapped(-1.0, 1.0) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..spec.n_azimuth {
                    let phi = (j as f64 + 0.5) * dphi;
                    let dir = ThreeVector::new(s * phi.cos(), s * phi.sin(), c);
                    modes.push(PhotonMode {
                        k: FourVector::from_parts(k, dir * k),
                        weight: wk * wc * dphi,
                        polarizations: {
                            let (e1, e2) = dir.orthonormal_pair();
                            [e1, e2]
                        },
                    });
                }
            }
        }
        Ok(Self { spec, modes })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn modes(&self) -> &[PhotonMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn ir_cutoff(&self) -> f64 {
        self.spec.ir_cutoff
    }

    pub fn uv_cutoff(&self) -> f64 {
        self.spec.uv_cutoff
    }

    /// `∫d³k g(k)` over the shell `λ < |k⃗| < Λ`.
    pub fn integrate(&self, g: impl Fn(&FourVector) -> f64) -> f64 {
        sum(self.modes.iter().map(|m| m.weight * g(&m.k)))
    }

    /// Snapshot of the grid, one row per mode.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k0,kx,ky,kz,weight")?;
        for m in &self.modes {
            let k = m.k.0;
            writeln!(out, "{:e},{:e},{:e},{:e},{:e}", k[0], k[1], k[2], k[3], m.weight)?;
        }
        Ok(())
    }
}

/// Builds a log-radial × Gauss–Legendre × uniform-azimuth photon grid.
pub fn build_grid(
    ir_cutoff: f64,
    uv_cutoff: f64,
    n_radial: usize,
    n_polar: usize,
    n_azimuth: usize,
) -> Result<PhotonModeGrid> {
    PhotonModeGrid::new(GridSpec {
        ir_cutoff,
        uv_cutoff,
        n_radial,
        n_polar,
        n_azimuth,
    })
}

/// The minimal-dressing vector `V^μ = (η+v)^μ (η−v)·k − k^μ` for a particle
/// of 3-velocity `v` and photon mode `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressingVector {
    vector: FourVector,
    v_dot_k: f64,
}

impl DressingVector {
    pub fn new(velocity: ThreeVector, k: &FourVector) -> Self {
        let plus = FourVector::ETA + FourVector::spatial_only(velocity);
        let minus = FourVector::ETA - FourVector::spatial_only(velocity);
        let vector = plus * minus.dot(k) - *k;
        Self {
            vector,
            v_dot_k: vector.dot(k),
        }
    }

    /// `V^μ`
    pub fn vector(&self) -> FourVector {
        self.vector
    }

    /// `V·k`
    pub fn v_dot_k(&self) -> f64 {
        self.v_dot_k
    }

    /// `c^μ = V^μ/(V·k)`
    pub fn coefficient(&self) -> FourVector {
        self.vector * (1.0 / self.v_dot_k)
    }
}

/// Per-mode bracket of a single constituent: `p^μ/(p·k)`, minus `c^μ` when
/// dressed.
fn constituent_direction(p: &OnShellMomentum, k: &FourVector, dressed: bool) -> FourVector {
    let p4 = p.four_vector();
    let bare = p4 * (1.0 / minkowski_dot(&p4, k));
    if dressed {
        bare - DressingVector::new(p.velocity(), k).coefficient()
    } else {
        bare
    }
}

/// `d^μ(k) = p^μ/(p·k) − c^μ`, which on the mass shell is proportional to
/// `k^μ`.
pub fn residue_direction(p: &OnShellMomentum, k: &FourVector) -> FourVector {
    constituent_direction(p, k, true)
}

/// `max_{μν} |d^μ k^ν − d^ν k^μ|` for one mode.
pub fn gauge_residue(p: &OnShellMomentum, k: &FourVector) -> f64 {
    let d = residue_direction(p, k);
    let mut worst = 0.0f64;
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            worst = worst.max((d[mu] * k[nu] - d[nu] * k[mu]).abs());
        }
    }
    worst
}

/// [`gauge_residue`] maximised over every mode of `grid`.
pub fn max_gauge_residue(p: &OnShellMomentum, grid: &PhotonModeGrid) -> f64 {
    ordered_map(grid.modes(), |m| gauge_residue(p, &m.k))
        .into_iter()
        .fold(0.0, f64::max)
}

/// How a 4-component amplitude is contracted into a photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// Two real polarisations orthogonal to `k⃗`: the physical content.
    Transverse,
    /// `−g_μν f^μ f^ν*`, indefinite.
    Feynman,
}

/// Coherent amplitude `f^μ(k)` of a photon cloud on a grid.
#[derive(Debug, Clone)]
pub struct CloudAmplitude<'g> {
    grid: &'g PhotonModeGrid,
    values: Vec<[Complex64; 4]>,
    momenta: Vec<OnShellMomentum>,
    time: f64,
    dressed: bool,
}

impl<'g> CloudAmplitude<'g> {
    /// The identically vanishing cloud (the photon vacuum).
    pub fn zero(grid: &'g PhotonModeGrid) -> Self {
        Self {
            grid,
            values: vec![[Complex64::new(0.0, 0.0); 4]; grid.len()],
            momenta: Vec::new(),
            time: 0.0,
            dressed: false,
        }
    }

    pub fn grid(&self) -> &'g PhotonModeGrid {
        self.grid
    }

    pub fn values(&self) -> &[[Complex64; 4]] {
        &self.values
    }

    pub fn momenta(&self) -> &[OnShellMomentum] {
        &self.momenta
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn is_dressed(&self) -> bool {
        self.dressed
    }

    /// Transverse components `ε_pol·f` for mode `i`.
    fn transverse(&self, i: usize) -> [Complex64; 2] {
        let f = &self.values[i];
        self.grid.modes[i]
            .polarizations
            .map(|e| f[1] * e[0] + f[2] * e[1] + f[3] * e[2])
    }

    /// Amplitude snapshot, one row per mode.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "k0,kx,ky,kz,weight,re_f0,im_f0,re_f1,im_f1,re_f2,im_f2,re_f3,im_f3"
        )?;
        for (m, f) in self.grid.modes.iter().zip(&self.values) {
            let k = m.k.0;
            write!(out, "{:e},{:e},{:e},{:e},{:e}", k[0], k[1], k[2], k[3], m.weight)?;
            for z in f {
                write!(out, ",{:e},{:e}", z.re, z.im)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Coherent cloud amplitude of a set of charged constituents at time `t`:
///
/// `f^μ(k) = e (2π)^{-3/2} (2k₀)^{-1/2} Σ_i {p_i^μ/(p_i·k) [− c_i^μ]} e^{i k·p_i t/p_i0}`
///
/// with the `c_i^μ` terms present only when `dressed` is set.
pub fn cloud_amplitude<'g>(
    momenta: &[OnShellMomentum],
    t: f64,
    grid: &'g PhotonModeGrid,
    coupling: Coupling,
    dressed: bool,
) -> CloudAmplitude<'g> {
    let prefactor = coupling.charge() / (2.0 * PI).powf(1.5);
    let values = ordered_map(grid.modes(), |mode| {
        let k = &mode.k;
        let norm = prefactor / (2.0 * k.time()).sqrt();
        let mut f = [Complex64::new(0.0, 0.0); 4];
        for p in momenta {
            let p4 = p.four_vector();
            let phase = Complex64::from_polar(1.0, minkowski_dot(k, &p4) * t / p4.time());
            let dir = constituent_direction(p, k, dressed);
            for (fm, dm) in f.iter_mut().zip(dir.0) {
                *fm += phase * (norm * dm);
            }
        }
        f
    });
    CloudAmplitude {
        grid,
        values,
        momenta: momenta.to_vec(),
        time: t,
        dressed,
    }
}

/// Cloud of the undressed asymptotic evolution, `W(p₁, p₂, t)`.
pub fn cloud_amplitude_w<'g>(
    p1: &OnShellMomentum,
    p2: &OnShellMomentum,
    t: f64,
    grid: &'g PhotonModeGrid,
    coupling: Coupling,
) -> CloudAmplitude<'g> {
    cloud_amplitude(&[*p1, *p2], t, grid, coupling, false)
}

/// Cloud of the dressed combination `W′`, velocities taken on the mass shell.
pub fn cloud_amplitude_dressed<'g>(
    p1: &OnShellMomentum,
    p2: &OnShellMomentum,
    t: f64,
    grid: &'g PhotonModeGrid,
    coupling: Coupling,
) -> CloudAmplitude<'g> {
    cloud_amplitude(&[*p1, *p2], t, grid, coupling, true)
}

/// Mean photon number `Σ_modes w · |f|²` under the given contraction.
pub fn soft_photon_number(amplitude: &CloudAmplitude<'_>, projection: Projection) -> f64 {
    let modes = amplitude.grid.modes();
    let idx: Vec<usize> = (0..modes.len()).collect();
    let terms = ordered_map(&idx, |&i| {
        let density = match projection {
            Projection::Transverse => amplitude.transverse(i).iter().map(|z| z.norm_sqr()).sum::<f64>(),
            Projection::Feynman => {
                let f = &amplitude.values[i];
                -f[0].norm_sqr() + f[1].norm_sqr() + f[2].norm_sqr() + f[3].norm_sqr()
            }
        };
        modes[i].weight * density
    });
    sum(terms)
}

fn check_same_grid(f: &CloudAmplitude<'_>, g: &CloudAmplitude<'_>) -> Result<()> {
    if f.grid.spec != g.grid.spec || f.values.len() != g.values.len() {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", f.grid.spec, g.grid.spec)));
    }
    Ok(())
}

/// Transverse inner product `⟨g, f⟩ = Σ w Σ_pol (ε·g)* (ε·f)`.
pub fn transverse_inner(f: &CloudAmplitude<'_>, g: &CloudAmplitude<'_>) -> Result<Complex64> {
    check_same_grid(f, g)?;
    let modes = f.grid.modes();
    let idx: Vec<usize> = (0..modes.len()).collect();
    let terms = ordered_map(&idx, |&i| {
        let (tf, tg) = (f.transverse(i), g.transverse(i));
        (tg[0].conj() * tf[0] + tg[1].conj() * tf[1]) * modes[i].weight
    });
    Ok(sum_complex(terms))
}

/// Overlap of the normalised coherent states built from `f` and `g`:
/// `exp(−½‖f‖² − ½‖g‖² + ⟨g, f⟩)`, transverse contractions throughout.
pub fn coherent_overlap(f: &CloudAmplitude<'_>, g: &CloudAmplitude<'_>) -> Result<Complex64> {
    let ff = transverse_inner(f, f)?.re;
    let gg = transverse_inner(g, g)?.re;
    let gf = transverse_inner(f, g)?;
    Ok((gf - 0.5 * ff - 0.5 * gg).exp())
}

/// Least-squares fit `N = slope · ln(1/λ) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Largest absolute residual divided by the range of `N`.
    pub max_residual_fraction: f64,
}

/// Fits photon numbers against `ln(1/λ)`; needs at least two distinct cutoffs.
pub fn fit_log_divergence(ir_cutoffs: &[f64], numbers: &[f64]) -> Result<LogFit> {
    if ir_cutoffs.len() != numbers.len() || ir_cutoffs.len() < 2 {
        return Err(Error::InvalidParameter(
            "log fit needs matching cutoff/number lists of length ≥ 2".into(),
        ));
    }
    let xs: Vec<f64> = ir_cutoffs.iter().map(|l| -l.ln()).collect();
    let n = xs.len() as f64;
    let mx = sum(xs.iter().copied()) / n;
    let my = sum(numbers.iter().copied()) / n;
    let sxx = sum(xs.iter().map(|x| (x - mx).powi(2)));
    let sxy = sum(xs.iter().zip(numbers).map(|(x, y)| (x - mx) * (y - my)));
    let syy = sum(numbers.iter().map(|y| (y - my).powi(2)));
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("IR cutoffs must be distinct".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(numbers)
        .map(|(x, y)| y - (slope * x + intercept))
        .collect();
    let ss_res = sum(residuals.iter().map(|r| r * r));
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let range = numbers.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - numbers.iter().copied().fold(f64::INFINITY, f64::min);
    let max_res = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    Ok(LogFit {
        slope,
        intercept,
        r_squared,
        max_residual_fraction: if range > 0.0 { max_res / range } else { 0.0 },
    })
}
