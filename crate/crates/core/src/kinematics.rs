//! Minkowski four-vectors, mass-shell momenta and relative velocities.
//!
//! Signature `(+, −, −, −)`; energies in units of the fermion mass.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for collinearity of two velocities.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// A spatial 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThreeVector(pub [f64; 3]);

impl ThreeVector {
    pub const ZERO: Self = Self([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = other.0;
        Self([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit vector along `self`, `None` for the zero vector.
    pub fn unit(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Two unit vectors completing `self` (assumed unit) to a right-handed
    /// orthonormal frame.
    pub fn orthonormal_pair(&self) -> (Self, Self) {
        let helper = if self.0[0].abs() < 0.9 {
            Self::new(1.0, 0.0, 0.0)
        } else {
            Self::new(0.0, 1.0, 0.0)
        };
        let e1 = self.cross(&helper).unit().expect("non-parallel helper");
        let e2 = self.cross(&e1);
        (e1, e2)
    }
}

impl Add for ThreeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for ThreeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for ThreeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for ThreeVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Index<usize> for ThreeVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<[f64; 3]> for ThreeVector {
    fn from(v: [f64; 3]) -> Self {
        Self(v)
    }
}

/// A Minkowski four-vector `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    /// The unit timelike vector `η = (1, 0⃗)`.
    pub const ETA: Self = Self([1.0, 0.0, 0.0, 0.0]);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self([t, x, y, z])
    }

    pub fn from_parts(t: f64, spatial: ThreeVector) -> Self {
        Self([t, spatial.0[0], spatial.0[1], spatial.0[2]])
    }

    /// A purely spatial vector `(0, v⃗)`.
    pub fn spatial_only(v: ThreeVector) -> Self {
        Self::from_parts(0.0, v)
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> ThreeVector {
        ThreeVector([self.0[1], self.0[2], self.0[3]])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        minkowski_dot(self, other)
    }

    /// Components with the index lowered, `a_μ = g_μν a^ν`.
    pub fn lowered(&self) -> [f64; 4] {
        [self.0[0], -self.0[1], -self.0[2], -self.0[3]]
    }

    /// Pure Lorentz boost by velocity `beta` (passive convention: the result
    /// is the same vector seen from a frame moving with `beta`).
    pub fn boost(&self, beta: ThreeVector) -> Result<Self> {
        let b2 = beta.norm_sqr();
        if !(b2 < 1.0) {
            return Err(Error::Domain(format!("boost speed |β| = {} ≥ 1", b2.sqrt())));
        }
        if b2 == 0.0 {
            return Ok(*self);
        }
        let gamma = 1.0 / (1.0 - b2).sqrt();
        let t = self.time();
        let x = self.spatial();
        let bx = beta.dot(&x);
        let t_new = gamma * (t - bx);
        let x_new = x + beta * ((gamma - 1.0) * bx / b2 - gamma * t);
        Ok(Self::from_parts(t_new, x_new))
    }
}

impl Add for FourVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for FourVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for FourVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `a·b = a₀b₀ − a⃗·b⃗`
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

/// A particle momentum on its mass shell. The energy is always derived, so
/// `p·p = m²` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnShellMomentum {
    mass: f64,
    momentum: ThreeVector,
}

impl OnShellMomentum {
    pub fn new(mass: f64, momentum: ThreeVector) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !momentum.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "momentum must be finite, got {:?}",
                momentum.0
            )));
        }
        Ok(Self { mass, momentum })
    }

    /// Unit-mass particle with spatial momentum `p`.
    pub fn unit_mass(p: impl Into<ThreeVector>) -> Result<Self> {
        Self::new(1.0, p.into())
    }

    /// Particle of mass `mass` moving with 3-velocity `v`, `|v| < 1`.
    pub fn from_velocity(mass: f64, v: impl Into<ThreeVector>) -> Result<Self> {
        let v = v.into();
        let v2 = v.norm_sqr();
        if !(v2 < 1.0) {
            return Err(Error::Domain(format!("speed |v| = {} ≥ 1", v2.sqrt())));
        }
        let gamma = 1.0 / (1.0 - v2).sqrt();
        Self::new(mass, v * (gamma * mass))
    }

    pub fn at_rest(mass: f64) -> Result<Self> {
        Self::new(mass, ThreeVector::ZERO)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn momentum(&self) -> ThreeVector {
        self.momentum
    }

    /// `p₀ = sqrt(p⃗² + m²)`
    pub fn energy(&self) -> f64 {
        (self.momentum.norm_sqr() + self.mass * self.mass).sqrt()
    }

    /// `v⃗ = p⃗/p₀`
    pub fn velocity(&self) -> ThreeVector {
        self.momentum * (1.0 / self.energy())
    }

    /// `γ = p₀/m`
    pub fn gamma(&self) -> f64 {
        self.energy() / self.mass
    }

    pub fn four_vector(&self) -> FourVector {
        FourVector::from_parts(self.energy(), self.momentum)
    }

    /// The same particle seen from a frame moving with velocity `beta`.
    pub fn boosted(&self, beta: ThreeVector) -> Result<Self> {
        let p = self.four_vector().boost(beta)?;
        Self::new(self.mass, p.spatial())
    }
}

/// Lorentz-invariant relative speed `u(p,q) = sqrt(1 − m⁴/(p·q)²)` of two
/// equal-mass particles.
///
/// Evaluated as `sqrt((p·q − m²)(p·q + m²))/(p·q)` with
/// `p·q − m² = ½(|Δp⃗|² − ΔE²)`, which keeps full relative precision for
/// slowly separating particles.
pub fn relative_velocity_invariant(p: &OnShellMomentum, q: &OnShellMomentum) -> Result<f64> {
    let m = p.mass();
    if (q.mass() - m).abs() > 1e-12 * m {
        return Err(Error::Domain(format!(
            "relative velocity needs equal masses, got {} and {}",
            m,
            q.mass()
        )));
    }
    let pq = minkowski_dot(&p.four_vector(), &q.four_vector());
    let (ep, eq) = (p.energy(), q.energy());
    let dp = p.momentum() - q.momentum();
    let de = (p.momentum().norm_sqr() - q.momentum().norm_sqr()) / (ep + eq);
    let excess = 0.5 * (dp.norm_sqr() - de * de);
    if excess < -1e-12 * m * m {
        return Err(Error::Domain(format!(
            "p·q = {pq} below m² = {} for an on-shell pair",
            m * m
        )));
    }
    let excess = excess.max(0.0);
    Ok((excess * (pq + m * m)).sqrt() / pq)
}

/// Relativistic relative speed from 3-velocities, `|v⃗₁ − v⃗₂|/(1 − v⃗₁·v⃗₂)`.
///
/// Only defined here for collinear (parallel or antiparallel) velocities.
pub fn relative_velocity_3v(v1: ThreeVector, v2: ThreeVector) -> Result<f64> {
    for v in [v1, v2] {
        if !(v.norm_sqr() < 1.0) {
            return Err(Error::Domain(format!("speed |v| = {} ≥ 1", v.norm())));
        }
    }
    check_collinear(v1, v2)?;
    Ok((v1 - v2).norm() / (1.0 - v1.dot(&v2)))
}

/// Fails with [`Error::NonCollinear`] unless `v1 × v2` vanishes to
/// [`COLLINEAR_TOL`] relative to `|v1||v2|`.
pub fn check_collinear(v1: ThreeVector, v2: ThreeVector) -> Result<()> {
    let scale = v1.norm() * v2.norm();
    if v1.cross(&v2).norm() > COLLINEAR_TOL * scale {
        return Err(Error::NonCollinear(v1.0, v2.0));
    }
    Ok(())
}

/// `R⃗ = x⃗ − v⃗ t`
pub fn retarded_position(x: ThreeVector, v: ThreeVector, t: f64) -> ThreeVector {
    x - v * t
}

/// Straight world line through `base` with constant 3-velocity:
/// `x⃗(s) = x⃗ + (s − x⁰)v⃗`, `x⁰(s) = s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldLine {
    pub base: FourVector,
    pub velocity: ThreeVector,
}

impl WorldLine {
    pub fn new(base: FourVector, velocity: ThreeVector) -> Self {
        Self { base, velocity }
    }

    pub fn position(&self, s: f64) -> ThreeVector {
        self.base.spatial() + self.velocity * (s - self.base.time())
    }

    pub fn event(&self, s: f64) -> FourVector {
        FourVector::from_parts(s, self.position(s))
    }
}
