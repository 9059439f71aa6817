//! `O(m)×O(n)`-invariant minimal hypersurfaces of `R^{m+n}` reduced to
//! profile curves in the quadrant `Q = {x ≥ 0, y ≥ 0}`.
//!
//! A profile curve `γ(t) = (x, y)` parametrized by Euclidean arclength is
//! described by its radius `r = |γ|`, the polar angle `φ` of `γ` and the
//! direction angle `θ` of `γ'`. The angles obey the planar system
//! `(φ, θ)' = V(φ, θ) / (r sin 2φ)` with
//!
//! ```text
//! V(φ, θ) = ( sin 2φ · sin(θ − φ),
//!             2((n−1) cos θ cos φ − (m−1) sin θ sin φ) )
//! ```
//!
//! whose zeros are the cone line `ℓ_{m,n}` (at `p₁ = (α, α)`) and the same
//! line traversed backwards (at `p₂ = (α, α − π)`), `tan α = √((n−1)/(m−1))`.

mod annulus;
mod family;
mod field;
mod trajectory;

pub use annulus::{
    shoot_annulus, shoot_annulus_with, solve_annulus, solve_annulus_with, AnnulusOptions, AnnulusShot, AnnulusSolution,
    EPS_SCAN_SAMPLES,
};
pub use family::{
    cone_distance, construct_family, construct_family_member, integrate_from_axis, AxisStart, FamilyMember,
};
pub use field::{
    jacobian, nullclines, reduced_rhs, singular_points, v_field, AngularState, Classification, Nullclines,
    SingularityReport,
};
pub use trajectory::{CrossingEvent, CrossingKind, ProfileTrajectory};

use num_traits::Float;

use crate::{Error, Result};

/// The symmetry pair `(m, n)` of the group `O(m)×O(n)` acting on `R^{m+n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitParams {
    m: u32,
    n: u32,
}

impl OrbitParams {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::DomainError { what: "m", value: m as f64 });
        }
        if n < 2 {
            return Err(Error::DomainError { what: "n", value: n as f64 });
        }
        Ok(OrbitParams { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Ambient dimension `m + n`.
    pub fn dimension(&self) -> u32 {
        self.m + self.n
    }

    /// Below ambient dimension 8 the singular points of `V` are foci.
    pub fn is_oscillatory(&self) -> bool {
        self.dimension() < 8
    }

    /// Slope `√((n−1)/(m−1))` of the cone line `ℓ_{m,n}`.
    pub fn cone_slope(&self) -> f64 {
        ((self.n - 1) as f64 / (self.m - 1) as f64).sqrt()
    }

    /// Angle `α` of the cone line.
    pub fn alpha(&self) -> f64 {
        self.cone_slope().atan()
    }
}
