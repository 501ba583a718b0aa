//! World-line phases of the dressed two-fermion state.
//!
//! All phases are integrals of the same kernel along a straight world line,
//!
//! `f(s) = {D⃗(s)² + γ²[v⃗·D⃗(s)]²}^{−1/2}`,
//!
//! where `D⃗(s)` is the separation between the point on the integrated world
//! line and the source charge at time `s`, and `γ`, `v⃗` belong to the
//! integrated line. For a self term `D⃗ = R⃗ᵢ = x⃗ᵢ − v⃗ᵢt` is constant; for the
//! cross term `D⃗ = R⃗₁ + s v⃗_r` with `v⃗_r = v⃗₁ − v⃗₂`.
//!
//! Times may be negative (incoming configurations) as long as `t` and `t₀`
//! share a sign.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{
    check_collinear, relative_velocity_3v, relative_velocity_invariant, retarded_position, OnShellMomentum, ThreeVector,
};
use crate::quadrature::{adaptive, AdaptiveOptions};
use crate::Coupling;

/// Smallest admissible `|t₀|`.
pub const MIN_TIME: f64 = 1e-9;

/// Velocities below this relative speed are treated as comoving.
pub const MIN_RELATIVE_SPEED: f64 = 1e-12;

/// Quadrature tolerances used for world-line integrals.
pub const WORLD_LINE_QUADRATURE: AdaptiveOptions = AdaptiveOptions {
    abs_tol: 1e-10,
    rel_tol: 1e-12,
    max_intervals: 4096,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Particle {
    First,
    Second,
}

/// Kinematic input of the phase factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfig {
    pub v1: ThreeVector,
    pub v2: ThreeVector,
    pub x1: ThreeVector,
    pub x2: ThreeVector,
    pub t: f64,
    pub t0: f64,
    pub coupling: Coupling,
}

fn check_velocity(v: ThreeVector) -> Result<()> {
    if !(v.is_finite() && v.norm_sqr() < 1.0) {
        return Err(Error::Domain(format!("velocity {:?} is not subluminal", v.0)));
    }
    Ok(())
}

fn check_times(t: f64, t0: f64) -> Result<()> {
    if !(t.is_finite() && t0.is_finite()) || t0.abs() < MIN_TIME || t * t0 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "times must be finite, share a sign and satisfy |t0| ≥ {MIN_TIME:e}; got t = {t}, t0 = {t0}"
        )));
    }
    Ok(())
}

fn gamma(v: ThreeVector) -> f64 {
    1.0 / (1.0 - v.norm_sqr()).sqrt()
}

impl PhaseConfig {
    pub fn new(
        v1: impl Into<ThreeVector>,
        v2: impl Into<ThreeVector>,
        x1: impl Into<ThreeVector>,
        x2: impl Into<ThreeVector>,
        t: f64,
        t0: f64,
        coupling: Coupling,
    ) -> Result<Self> {
        let cfg = Self {
            v1: v1.into(),
            v2: v2.into(),
            x1: x1.into(),
            x2: x2.into(),
            t,
            t0,
            coupling,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Velocities taken on the mass shell, `v⃗ᵢ = p⃗ᵢ/pᵢ₀`.
    pub fn from_momenta(
        p1: &OnShellMomentum,
        p2: &OnShellMomentum,
        x1: impl Into<ThreeVector>,
        x2: impl Into<ThreeVector>,
        t: f64,
        t0: f64,
        coupling: Coupling,
    ) -> Result<Self> {
        Self::new(p1.velocity(), p2.velocity(), x1, x2, t, t0, coupling)
    }

    pub fn validate(&self) -> Result<()> {
        check_velocity(self.v1)?;
        check_velocity(self.v2)?;
        if !(self.x1.is_finite() && self.x2.is_finite()) {
            return Err(Error::InvalidParameter("positions must be finite".into()));
        }
        check_times(self.t, self.t0)?;
        check_collinear(self.v1, self.v2)
    }

    pub fn with_times(&self, t: f64, t0: f64) -> Result<Self> {
        check_times(t, t0)?;
        Ok(Self { t, t0, ..*self })
    }

    /// The same configuration with the particle labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            v1: self.v2,
            v2: self.v1,
            x1: self.x2,
            x2: self.x1,
            ..*self
        }
    }

    /// `(t, t₀, v⃗ᵢ) → (−t, −t₀, −v⃗ᵢ)`; every phase changes sign.
    fn mirrored(&self) -> Self {
        Self {
            v1: -self.v1,
            v2: -self.v2,
            t: -self.t,
            t0: -self.t0,
            ..*self
        }
    }

    fn line(&self, which: Particle) -> (ThreeVector, ThreeVector) {
        match which {
            Particle::First => (self.x1, self.v1),
            Particle::Second => (self.x2, self.v2),
        }
    }

    /// `R⃗ᵢ = x⃗ᵢ − v⃗ᵢt`
    pub fn retarded(&self, which: Particle) -> ThreeVector {
        let (x, v) = self.line(which);
        retarded_position(x, v, self.t)
    }

    /// `v⃗_r = v⃗₁ − v⃗₂`
    pub fn relative_velocity(&self) -> ThreeVector {
        self.v1 - self.v2
    }
}

/// `∫_{t₀}^{t} ds {|R⃗ + s w⃗|² + γ²[u⃗·(R⃗ + s w⃗)]²}^{−1/2}` by adaptive
/// quadrature, split at the point of closest approach.
fn kernel_integral(r: ThreeVector, w: ThreeVector, u: ThreeVector, g: f64, t0: f64, t: f64) -> Result<f64> {
    let g2 = g * g;
    let a = w.norm_sqr() + g2 * u.dot(&w).powi(2);
    let b = r.dot(&w) + g2 * u.dot(&r) * u.dot(&w);
    let c = r.norm_sqr() + g2 * u.dot(&r).powi(2);
    let (lo, hi) = if t0 < t { (t0, t) } else { (t, t0) };
    let s_min = if a > 0.0 { (-b / a).clamp(lo, hi) } else { lo };
    let q = |s: f64| {
        let d = r + w * s;
        d.norm_sqr() + g2 * u.dot(&d).powi(2)
    };
    let scale = r.norm().max(w.norm() * lo.abs().max(hi.abs()));
    if !(q(s_min) > (1e-12 * scale).powi(2)) || !(c.is_finite() && a.is_finite()) {
        return Err(Error::Singular(format!(
            "world lines meet at s = {s_min} (R = {:?}, v_r = {:?})",
            r.0, w.0
        )));
    }
    let f = |s: f64| 1.0 / q(s).sqrt();
    let mut total = 0.0;
    let mut edges = vec![t0];
    if s_min > lo && s_min < hi {
        edges.push(s_min);
    }
    edges.push(t);
    for e in edges.windows(2) {
        total += adaptive(e[0], e[1], WORLD_LINE_QUADRATURE, f)?.value;
    }
    Ok(total)
}

/// Self phase of a single world line, closed form:
/// `α (1/γ)(t − t₀)/sqrt(R⃗² + γ²(v⃗·R⃗)²)`, `R⃗ = x⃗ − v⃗t`.
pub fn kappa_self(v: ThreeVector, x: ThreeVector, t: f64, t0: f64, coupling: Coupling) -> Result<f64> {
    check_velocity(v)?;
    check_times(t, t0)?;
    let r = retarded_position(x, v, t);
    let g = gamma(v);
    let q = r.norm_sqr() + g * g * v.dot(&r).powi(2);
    if !(q > 0.0) {
        return Err(Error::Singular(format!(
            "particle sits on its own retarded position (x = {:?}, v = {:?}, t = {t})",
            x.0, v.0
        )));
    }
    Ok(coupling.alpha() / g * (t - t0) / q.sqrt())
}

/// Self phase `κᵢ` by world-line quadrature.
pub fn kappa_self_quadrature(cfg: &PhaseConfig, which: Particle) -> Result<f64> {
    cfg.validate()?;
    let (_, v) = cfg.line(which);
    let r = cfg.retarded(which);
    if r.norm_sqr() == 0.0 {
        return Err(Error::Singular(format!("R = 0 for particle {which:?}")));
    }
    let g = gamma(v);
    let integral = kernel_integral(r, ThreeVector::ZERO, v, g, cfg.t0, cfg.t)?;
    Ok(cfg.coupling.alpha() / g * integral)
}

/// Self phase `κᵢ` in closed form.
pub fn kappa_self_closed(cfg: &PhaseConfig, which: Particle) -> Result<f64> {
    cfg.validate()?;
    let (x, v) = cfg.line(which);
    kappa_self(v, x, cfg.t, cfg.t0, cfg.coupling)
}

/// Cross phase `κ₁₂` by world-line quadrature:
/// `α γ₁(1 − v⃗₁·v⃗₂) ∫_{t₀}^{t} ds {[R⃗₁ + s v⃗_r]² + γ₁²[v⃗₁·(R⃗₁ + s v⃗_r)]²}^{−1/2}`.
pub fn kappa_cross_quadrature(cfg: &PhaseConfig) -> Result<f64> {
    cfg.validate()?;
    let vr = cfg.relative_velocity();
    if vr.norm() < MIN_RELATIVE_SPEED {
        return Err(Error::Divergent("κ₁₂ needs distinct velocities".into()));
    }
    let g = gamma(cfg.v1);
    let integral = kernel_integral(cfg.retarded(Particle::First), vr, cfg.v1, g, cfg.t0, cfg.t)?;
    Ok(cfg.coupling.alpha() * g * (1.0 - cfg.v1.dot(&cfg.v2)) * integral)
}

/// Cross phase `κ₁₂` in closed form.
///
/// With `asymptotic` set this is `α (1/u_r) ln(t/t₀)`, `u_r` from the
/// 3-velocities. Otherwise the full expression
///
/// `α (1 − v⃗₁·v⃗₂)/v_r · [ln(t/t₀) + ln(F(t)/F(t₀))]`,
/// `F(τ) = (1 + R∥/(τ v_r))(1 + sqrt(b²/γ²/(τ v_r + R∥)² + 1))`,
///
/// where `R∥`, `b` are the components of `R⃗₁` along and across `v⃗_r`.
pub fn kappa_cross_closed(cfg: &PhaseConfig, asymptotic: bool) -> Result<f64> {
    cfg.validate()?;
    if cfg.t < 0.0 {
        return kappa_cross_closed(&cfg.mirrored(), asymptotic).map(|k| -k);
    }
    let alpha = cfg.coupling.alpha();
    if asymptotic {
        let u = relative_velocity_3v(cfg.v1, cfg.v2)?;
        if u < MIN_RELATIVE_SPEED {
            return Err(Error::Divergent("κ₁₂ diverges for comoving particles".into()));
        }
        return Ok(alpha / u * (cfg.t / cfg.t0).ln());
    }
    let vr_vec = cfg.relative_velocity();
    let vr = vr_vec.norm();
    if vr < MIN_RELATIVE_SPEED {
        return Err(Error::Divergent("κ₁₂ diverges for comoving particles".into()));
    }
    let e = vr_vec * (1.0 / vr);
    let r1 = cfg.retarded(Particle::First);
    let r_par = r1.dot(&e);
    let b = (r1 - e * r_par).norm();
    let g = gamma(cfg.v1);
    for tau in [cfg.t0, cfg.t] {
        if tau * vr + r_par <= 0.0 {
            return Err(Error::Singular(format!(
                "t·v_r + R∥ = {} ≤ 0 at t = {tau}: the world lines cross inside the window",
                tau * vr + r_par
            )));
        }
    }
    let big_f = |tau: f64| {
        let y = tau * vr + r_par;
        (1.0 + r_par / (tau * vr)).ln() + (1.0 + ((b / g / y).powi(2) + 1.0).sqrt()).ln()
    };
    let log = (cfg.t / cfg.t0).ln() + big_f(cfg.t) - big_f(cfg.t0);
    Ok(alpha * (1.0 - cfg.v1.dot(&cfg.v2)) / vr * log)
}

/// Phase-operator eigenvalue on a two-fermion state:
/// `ϕ = α (1/u_r) sign(t) ln(|t|/|t₀|)` with the invariant relative speed.
pub fn phi_eigenvalue(p1: &OnShellMomentum, p2: &OnShellMomentum, t: f64, t0: f64, coupling: Coupling) -> Result<f64> {
    check_times(t, t0)?;
    let u = relative_velocity_invariant(p1, p2)?;
    if u < MIN_RELATIVE_SPEED {
        return Err(Error::Divergent(format!("ϕ diverges for equal momenta (u_r = {u:e})")));
    }
    Ok(coupling.alpha() / u * t.signum() * (t.abs() / t0.abs()).ln())
}

/// How `κ₁₂` is evaluated in [`cancellation_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossMethod {
    Asymptotic,
    Closed,
    Quadrature,
}

pub fn kappa_cross(cfg: &PhaseConfig, method: CrossMethod) -> Result<f64> {
    match method {
        CrossMethod::Asymptotic => kappa_cross_closed(cfg, true),
        CrossMethod::Closed => kappa_cross_closed(cfg, false),
        CrossMethod::Quadrature => kappa_cross_quadrature(cfg),
    }
}

fn check_consistent(cfg: &PhaseConfig, p1: &OnShellMomentum, p2: &OnShellMomentum) -> Result<()> {
    for (v, p) in [(cfg.v1, p1), (cfg.v2, p2)] {
        if (v - p.velocity()).norm() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "configured velocity {:?} differs from p/p0 = {:?}",
                v.0,
                p.velocity().0
            )));
        }
    }
    Ok(())
}

/// `|e^{iϕ} e^{−iκ₁₂} − 1|`, evaluated as `|2 sin((ϕ − κ₁₂)/2)|`.
pub fn cancellation_residual(
    cfg: &PhaseConfig,
    p1: &OnShellMomentum,
    p2: &OnShellMomentum,
    method: CrossMethod,
) -> Result<f64> {
    cfg.validate()?;
    check_consistent(cfg, p1, p2)?;
    let phi = phi_eigenvalue(p1, p2, cfg.t, cfg.t0, cfg.coupling)?;
    let kappa = kappa_cross(cfg, method)?;
    Ok((2.0 * (0.5 * (phi - kappa)).sin()).abs())
}

/// Every phase of one configuration, plus the momentum-pair phase `θ`
/// relative to a second configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFactors {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa12: f64,
    pub phi: f64,
    /// `−κ(R₁,t) − κ(R₂,t) + κ(R₁′,t) + κ(R₂′,t)`
    pub theta: f64,
}

impl PhaseFactors {
    /// Unit-mass momenta are rebuilt from the velocities; `κ₁₂` by
    /// quadrature.
    pub fn evaluate(cfg: &PhaseConfig, primed: &PhaseConfig) -> Result<Self> {
        cfg.validate()?;
        primed.validate()?;
        let kappa1 = kappa_self_closed(cfg, Particle::First)?;
        let kappa2 = kappa_self_closed(cfg, Particle::Second)?;
        let kappa12 = kappa_cross_quadrature(cfg)?;
        let p1 = OnShellMomentum::from_velocity(1.0, cfg.v1)?;
        let p2 = OnShellMomentum::from_velocity(1.0, cfg.v2)?;
        let phi = phi_eigenvalue(&p1, &p2, cfg.t, cfg.t0, cfg.coupling)?;
        let primed_sum = kappa_self_closed(primed, Particle::First)? + kappa_self_closed(primed, Particle::Second)?;
        Ok(Self {
            kappa1,
            kappa2,
            kappa12,
            phi,
            theta: -(kappa1 + kappa2) + primed_sum,
        })
    }
}

/// Writes `t0,t,kappa12_quad,kappa12_closed,phi,residual` rows.
pub fn write_phase_csv<W: std::io::Write>(mut out: W, rows: &[PhaseRow]) -> std::io::Result<()> {
    writeln!(out, "t0,t,kappa12_quad,kappa12_closed,phi,residual")?;
    for r in rows {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e}",
            r.t0, r.t, r.kappa12_quad, r.kappa12_closed, r.phi, r.residual
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub t0: f64,
    pub t: f64,
    pub kappa12_quad: f64,
    pub kappa12_closed: f64,
    pub phi: f64,
    pub residual: f64,
}
