//! Flux, torque and balancing integrals over latitude spheres of
//! rotationally symmetric hypersurfaces in `R^{n+1}`.
//!
//! A latitude sphere at height `z` with radius `ρ` carries the conormal
//! `η = a_r ξ + a_z e_axis`, `ξ ∈ S^{n−1}`. For `n = 2` the integrals use the
//! periodic trapezoid rule. For `n > 2` every integrand here is a polynomial
//! of degree at most two in `ξ`, and the sphere integral is evaluated
//! exactly on the `2n` points `±e_i` with equal weights `ω_{n−1}/(2n)`.
//!
//! Vector results live in a three dimensional frame `(e_a, e_b, e_axis)`
//! spanned by two lateral directions and the axis. For `n = 2` this is the
//! ambient space; for `n > 2` the lateral pair is a [`Subspace3`].

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::{Error, Result};

pub const DEFAULT_QUAD_NODES: usize = 256;
const MIN_QUAD_NODES: usize = 8;

/// Area `ω_k` of the unit sphere `S^k ⊂ R^{k+1}`.
pub fn sphere_area(k: u32) -> f64 {
    // ω_k = 2π^{(k+1)/2} / Γ((k+1)/2), via ω_k = 2π/(k−1) · ω_{k−2}
    let mut omega = if k.is_multiple_of(2) { 2.0 } else { 2.0 * PI };
    let mut j = 2 + k % 2;
    while j <= k {
        omega *= 2.0 * PI / (j - 1) as f64;
        j += 2;
    }
    omega
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Pointing out of the surface piece: up at its top, down at its bottom.
    Outward,
    /// Pointing in the direction of increasing height.
    Upward,
}

/// Two lateral coordinate directions `e_a`, `e_b` of `R^n` which together
/// with the axis span the frame torques are reported in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subspace3 {
    lateral: [usize; 2],
}

impl Subspace3 {
    pub fn new(n: u32, a: usize, b: usize) -> Result<Self> {
        if a == b || a >= n as usize || b >= n as usize {
            return Err(Error::InvalidInput("lateral directions must be distinct indices below n"));
        }
        Ok(Subspace3 { lateral: [a, b] })
    }

    pub fn lateral(&self) -> [usize; 2] {
        self.lateral
    }
}

/// A latitude sphere `{(c + ρξ, z) : ξ ∈ S^{n−1}}` with its conormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCircle {
    n: u32,
    height: f64,
    radius: f64,
    // (axial, radial)
    conormal: (f64, f64),
    orientation: Orientation,
    // (e_a, e_b, e_axis) offset
    center: [f64; 3],
}

impl BoundaryCircle {
    pub fn new(n: u32, height: f64, radius: f64, conormal: (f64, f64), orientation: Orientation) -> Result<Self> {
        if n < 2 {
            return Err(Error::DomainError { what: "n", value: n as f64 });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::DomainError { what: "radius", value: radius });
        }
        if !((conormal.0.hypot(conormal.1) - 1.0).abs() < 1e-12) {
            return Err(Error::InvalidInput("conormal must have unit length"));
        }
        Ok(BoundaryCircle { n, height, radius, conormal, orientation, center: [0.0; 3] })
    }

    /// The latitude sphere at height `z` of a profile with `r(z) = radius`,
    /// `ṙ(z) = slope`; the conormal is the unit profile tangent, oriented.
    pub fn on_profile(n: u32, z: f64, radius: f64, slope: f64, orientation: Orientation) -> Result<Self> {
        let norm = (1.0 + slope * slope).sqrt();
        let sign = match orientation {
            Orientation::Upward => 1.0,
            Orientation::Outward if z > 0.0 => 1.0,
            Orientation::Outward if z < 0.0 => -1.0,
            Orientation::Outward => {
                return Err(Error::InvalidInput("outward conormal is ambiguous at height 0"));
            }
        };
        Self::new(n, z, radius, (sign / norm, sign * slope / norm), orientation)
    }

    /// The same sphere moved by `offset` in the `(e_a, e_b, e_axis)` frame.
    pub fn translated(&self, offset: [f64; 3]) -> Self {
        let mut out = *self;
        for i in 0..3 {
            out.center[i] += offset[i];
        }
        out
    }

    /// Ambient dimension `n + 1`.
    pub fn dimension(&self) -> usize {
        self.n as usize + 1
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `(axial, radial)` components of the conormal.
    pub fn conormal(&self) -> (f64, f64) {
        self.conormal
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    /// Quadrature points on the sphere as `(X, η, weight)` projected to the
    /// frame of `frame`; the weight includes `ρ^{n−1}`.
    fn nodes(&self, quad_nodes: usize, frame: Subspace3) -> Result<Vec<([f64; 3], [f64; 3], f64)>> {
        if quad_nodes < MIN_QUAD_NODES {
            return Err(Error::InvalidInput("at least 8 quadrature nodes are required"));
        }
        let (az, ar) = self.conormal;
        let rho = self.radius;
        let c = self.center;
        let point = |xa: f64, xb: f64, w: f64| {
            (
                [c[0] + rho * xa, c[1] + rho * xb, c[2] + self.height],
                [ar * xa, ar * xb, az],
                w * rho.powi(self.n as i32 - 1),
            )
        };
        if self.n == 2 {
            let w = 2.0 * PI / quad_nodes as f64;
            return Ok((0..quad_nodes)
                .map(|j| {
                    let s = 2.0 * PI * j as f64 / quad_nodes as f64;
                    point(s.cos(), s.sin(), w)
                })
                .collect());
        }
        let w = sphere_area(self.n - 1) / (2 * self.n) as f64;
        let [a, b] = frame.lateral;
        let mut out = Vec::with_capacity(2 * self.n as usize);
        for i in 0..self.n as usize {
            for sign in [1.0, -1.0] {
                let xa = if i == a { sign } else { 0.0 };
                let xb = if i == b { sign } else { 0.0 };
                out.push(point(xa, xb, w));
            }
        }
        Ok(out)
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn default_frame() -> Subspace3 {
    Subspace3 { lateral: [0, 1] }
}

fn frame_for(circle: &BoundaryCircle, subspace: Option<Subspace3>) -> Result<Subspace3> {
    match subspace {
        Some(s) if s.lateral.iter().all(|&i| i < circle.n as usize) => Ok(s),
        Some(_) => Err(Error::InvalidInput("subspace does not fit the circle's dimension")),
        None if circle.n == 2 => Ok(default_frame()),
        None => Err(Error::DimensionUnsupported { dim: circle.dimension() }),
    }
}

/// `F(σ) = ∫_σ η` in ambient coordinates (lateral first, axis last). The
/// lateral components vanish by symmetry and are returned as exact zeros.
pub fn flux(circle: &BoundaryCircle, quad_nodes: usize) -> Result<Vec<f64>> {
    let axial: f64 = circle.nodes(quad_nodes, default_frame())?.iter().map(|(_, eta, w)| w * eta[2]).sum();
    let mut out = vec![0.0; circle.dimension()];
    out[circle.n as usize] = axial;
    Ok(out)
}

/// `T(σ) = ∫_σ X × η` in the `(e_a, e_b, e_axis)` frame. For `n > 2` a
/// [`Subspace3`] must be given.
pub fn torque(circle: &BoundaryCircle, quad_nodes: usize, subspace: Option<Subspace3>) -> Result<[f64; 3]> {
    torque_about([0.0; 3], circle, quad_nodes, subspace)
}

/// `T_W(σ) = ∫_σ (X − W) × η`.
pub fn torque_about(
    base: [f64; 3],
    circle: &BoundaryCircle,
    quad_nodes: usize,
    subspace: Option<Subspace3>,
) -> Result<[f64; 3]> {
    let frame = frame_for(circle, subspace)?;
    let mut out = [0.0; 3];
    for (x, eta, w) in circle.nodes(quad_nodes, frame)? {
        let t = cross([x[0] - base[0], x[1] - base[1], x[2] - base[2]], eta);
        for i in 0..3 {
            out[i] += w * t[i];
        }
    }
    Ok(out)
}

/// A Killing field of the `(e_a, e_b, e_axis)` frame, extended by zero to
/// the remaining lateral directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KillingFieldSpec {
    /// `K(X) = v`
    Translation([f64; 3]),
    /// `K(X) = v × (X − W)`
    Rotation { axis: [f64; 3], base: [f64; 3] },
}

impl KillingFieldSpec {
    pub fn translation(v: [f64; 3]) -> Self {
        KillingFieldSpec::Translation(v)
    }

    pub fn rotation(axis: [f64; 3], base: [f64; 3]) -> Result<Self> {
        if dot(axis, axis) == 0.0 {
            return Err(Error::InvalidInput("rotation axis must be nonzero"));
        }
        Ok(KillingFieldSpec::Rotation { axis, base })
    }

    pub fn at(&self, x: [f64; 3]) -> [f64; 3] {
        match *self {
            KillingFieldSpec::Translation(v) => v,
            KillingFieldSpec::Rotation { axis, base } => cross(axis, [x[0] - base[0], x[1] - base[1], x[2] - base[2]]),
        }
    }
}

/// `∫ K·η` over one sphere.
pub fn killing_flux(
    circle: &BoundaryCircle,
    field: &KillingFieldSpec,
    quad_nodes: usize,
    subspace: Option<Subspace3>,
) -> Result<f64> {
    let frame = subspace.unwrap_or_else(default_frame);
    let frame = frame_for(circle, Some(frame))?;
    Ok(circle.nodes(quad_nodes, frame)?.iter().map(|(x, eta, w)| w * dot(field.at(*x), *eta)).sum())
}

/// `|Σ_σ ∫_σ K·η|` over the given boundary spheres. Vanishes when they bound
/// a minimal piece.
pub fn balancing_residual(
    circles: &[BoundaryCircle],
    field: &KillingFieldSpec,
    quad_nodes: usize,
    subspace: Option<Subspace3>,
) -> Result<f64> {
    let mut total = 0.0;
    for c in circles {
        total += killing_flux(c, field, quad_nodes, subspace)?;
    }
    Ok(total.abs())
}
