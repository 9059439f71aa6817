use alloc::vec::Vec;
use num_traits::Float;

use super::{symmetric_grid, CatenoidProfile, ProfileSample};
use crate::balancing::{BoundaryCircle, Orientation};
use crate::root::refine_root;
use crate::{Error, Result};

/// Closest distance to the axis crossing at which bracketing starts.
const START_OFFSET: f64 = 1e-4;
const EXPANSION: f64 = 1.25;
const ROOT_TOL: f64 = 1e-15;
/// Step for the third-derivative differences of `f'`.
const THIRD_DERIVATIVE_STEP: f64 = 1e-2;
/// Step for the second-derivative differences of `f'` at `c = 0`.
const SECOND_DERIVATIVE_STEP: f64 = 1e-3;
/// Bound the reciprocal-term derivative is compared against.
pub const RECIPROCAL_BOUND: f64 = 3.0;

impl CatenoidProfile {
    /// `z − r(z − c)/ṙ(z − c)`: zero where the shifted profile meets a
    /// sphere about the origin orthogonally.
    pub fn tangency_function(&self, c: f64, z: f64) -> Option<f64> {
        let (r, rdot) = self.eval(z - c)?;
        Some(z - r / rdot)
    }

    /// Root of the tangency function on one side of the shifted waist, in
    /// terms of `u = z − c` with `sign(u) = side`.
    fn tangency_offset(&self, c: f64, side: f64) -> Result<f64> {
        let g = |u: f64| match self.eval(u) {
            Some((r, rdot)) => u + c - r / rdot,
            None => f64::NAN,
        };
        let limit = self.half_width();
        let mut prev = side * START_OFFSET;
        let g0 = g(prev);
        loop {
            let next = (prev * EXPANSION).clamp(-limit, limit);
            let gn = g(next);
            if gn.signum() != g0.signum() {
                return refine_root(g, (prev, next), ROOT_TOL);
            }
            if next.abs() >= limit {
                return Err(Error::DomainExceeded { requested: c, limit });
            }
            prev = next;
        }
    }

    /// Heights `z₁ < c < z₂` at which the profile shifted by `c` is tangent
    /// to a sphere about the origin.
    pub fn tangency_roots(&self, c: f64) -> Result<(f64, f64)> {
        check_shift(c)?;
        self.roots_unchecked(c)
    }

    fn roots_unchecked(&self, c: f64) -> Result<(f64, f64)> {
        let u1 = self.tangency_offset(c, -1.0)?;
        let u2 = self.tangency_offset(c, 1.0)?;
        Ok((u1 + c, u2 + c))
    }

    pub fn certificate(&self, c: f64) -> Result<ShiftCertificate> {
        check_shift(c)?;
        self.certificate_unchecked(c)
    }

    fn certificate_unchecked(&self, c: f64) -> Result<ShiftCertificate> {
        let (z1, z2) = self.roots_unchecked(c)?;
        let n = self.n() as f64;
        let end = |z: f64| -> Result<EndData> {
            let (r, rdot) = self.eval(z - c).ok_or(Error::DomainExceeded { requested: c, limit: self.half_width() })?;
            let du = -rdot * rdot / ((n - 1.0) * (1.0 + rdot * rdot));
            let big = r.powi(2 * self.n() as i32 - 2);
            Ok(EndData {
                r,
                rdot,
                du,
                f: z * z + r * r,
                df: 2.0 * z * (n - big) / (n - 1.0),
                residual: (z * rdot - r).abs(),
            })
        };
        let (a, b) = (end(z1)?, end(z2)?);
        Ok(ShiftCertificate {
            n: self.n(),
            c,
            z1,
            z2,
            r1: a.r,
            r2: b.r,
            rdot1: a.rdot,
            rdot2: b.rdot,
            dz1_dc: 1.0 + a.du,
            dz2_dc: 1.0 + b.du,
            du1_dc: a.du,
            du2_dc: b.du,
            f1: a.f,
            f2: b.f,
            df1: a.df,
            df2: b.df,
            residual1: a.residual,
            residual2: b.residual,
        })
    }

    /// Central differences in `c` of `(z₁, z₂, f₁, f₂)` with step `h`.
    pub fn shift_derivatives_fd(&self, c: f64, h: f64) -> Result<[f64; 4]> {
        let plus = self.certificate_unchecked(c + h)?;
        let minus = self.certificate_unchecked(c - h)?;
        let d = |a: f64, b: f64| (a - b) / (2.0 * h);
        Ok([d(plus.z1, minus.z1), d(plus.z2, minus.z2), d(plus.f1, minus.f1), d(plus.f2, minus.f2)])
    }

    /// `f'''₁(c) − f'''₂(c)` from fourth-order second differences of the
    /// analytic `f'`.
    pub fn third_derivative_gap(&self, c: f64, h: f64) -> Result<f64> {
        let mut gap = 0.0;
        for (w, k) in [(-1.0, -2.0), (16.0, -1.0), (-30.0, 0.0), (16.0, 1.0), (-1.0, 2.0)] {
            let cert = self.certificate_unchecked(c + k * h)?;
            gap += w * (cert.df1 - cert.df2);
        }
        Ok(gap / (12.0 * h * h))
    }
}

struct EndData {
    r: f64,
    rdot: f64,
    du: f64,
    f: f64,
    df: f64,
    residual: f64,
}

fn check_shift(c: f64) -> Result<()> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::DomainError { what: "c", value: c });
    }
    Ok(())
}

/// Tangency heights of the profile shifted by `c` and the squared distances
/// `f_i = |γ(z_i)|²` of the two boundary points from the origin, with their
/// analytic derivatives in `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftCertificate {
    pub n: u32,
    pub c: f64,
    pub z1: f64,
    pub z2: f64,
    /// `r(z_i − c)`
    pub r1: f64,
    pub r2: f64,
    /// `ṙ(z_i − c)`
    pub rdot1: f64,
    pub rdot2: f64,
    pub dz1_dc: f64,
    pub dz2_dc: f64,
    /// `d(z_i − c)/dc`
    pub du1_dc: f64,
    pub du2_dc: f64,
    pub f1: f64,
    pub f2: f64,
    pub df1: f64,
    pub df2: f64,
    /// `|z_i ṙ(z_i − c) − r(z_i − c)|`
    pub residual1: f64,
    pub residual2: f64,
}

impl ShiftCertificate {
    /// `f₁ − f₂`, positive for every `c > 0`.
    pub fn gap(&self) -> f64 {
        self.f1 - self.f2
    }

    /// `(f''₁, f''₂)` from `(n−1)/2 · f'' = n − 3 − 2/(n−1) + n/(n−1)·(R + 1/R)`,
    /// `R = r^{2n−2}` at the tangency point.
    pub fn second_derivatives(&self) -> (f64, f64) {
        let n = self.n as f64;
        let p = 2 * self.n as i32 - 2;
        let f2 = |r: f64| {
            let big = r.powi(p);
            2.0 / (n - 1.0) * (n - 3.0 - 2.0 / (n - 1.0) + n / (n - 1.0) * (big + 1.0 / big))
        };
        (f2(self.r1), f2(self.r2))
    }

    /// `n/(n−1) · (d/dc R(u₂)⁻¹ − d/dc R(u₁)⁻¹)`.
    pub fn reciprocal_term(&self) -> f64 {
        let n = self.n as f64;
        let p = 2 * self.n as i32;
        let d = |r: f64, rdot: f64| {
            let big = r.powi(p - 2);
            2.0 * r.powi(p - 3) * rdot * (big - 1.0) / (big * big * big)
        };
        n / (n - 1.0) * (d(self.r2, self.rdot2) - d(self.r1, self.rdot1))
    }
}

pub fn tangency_roots(n: u32, c: f64) -> Result<(f64, f64)> {
    CatenoidProfile::standard(n)?.tangency_roots(c)
}

pub fn shift_certificate(n: u32, c: f64) -> Result<ShiftCertificate> {
    CatenoidProfile::standard(n)?.certificate(c)
}

/// Numerical evidence that `c = 0` is the only shift producing a free
/// boundary catenoid.
#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    pub n: u32,
    pub certificates: Vec<ShiftCertificate>,
    /// `f₁(c) − f₂(c) > 0` at every grid point `c > 0`.
    pub gaps_positive: bool,
    /// `|f''₁(0) − f''₂(0)|` from the closed form.
    pub second_derivative_gap: f64,
    /// The same from central differences of `f'`.
    pub second_derivative_gap_fd: f64,
    /// `(c, f'''₁(c) − f'''₂(c))` at every grid point `c > 0`.
    pub third_derivative_gaps: Vec<(f64, f64)>,
    /// `r(z₀)` at the unshifted tangency height `z₀`.
    pub r_z0: f64,
    /// `n^{1/(2n−2)}`
    pub r_z0_bound: f64,
    /// Largest [`ShiftCertificate::reciprocal_term`] over the grid.
    pub reciprocal_term_max: f64,
    /// Set when the reciprocal term exceeds [`RECIPROCAL_BOUND`].
    pub reciprocal_term_flagged: bool,
}

pub fn uniqueness_sweep(n: u32, c_grid: &[f64]) -> Result<UniquenessReport> {
    let profile = CatenoidProfile::standard(n)?;
    let mut certificates = Vec::with_capacity(c_grid.len());
    let mut third = Vec::new();
    for &c in c_grid {
        let cert = profile.certificate(c)?;
        if c > 0.0 {
            third.push((c, profile.third_derivative_gap(c, THIRD_DERIVATIVE_STEP)?));
        }
        certificates.push(cert);
    }
    let at_zero = profile.certificate(0.0)?;
    let (a, b) = at_zero.second_derivatives();
    let h = SECOND_DERIVATIVE_STEP;
    let (plus, minus) = (profile.certificate_unchecked(h)?, profile.certificate_unchecked(-h)?);
    let fd = ((plus.df1 - minus.df1) - (plus.df2 - minus.df2)) / (2.0 * h);
    let reciprocal_term_max = certificates.iter().map(|c| c.reciprocal_term()).fold(f64::NEG_INFINITY, f64::max);
    let nf = n as f64;
    Ok(UniquenessReport {
        n,
        gaps_positive: certificates.iter().filter(|c| c.c > 0.0).all(|c| c.gap() > 0.0),
        certificates,
        second_derivative_gap: (a - b).abs(),
        second_derivative_gap_fd: fd.abs(),
        third_derivative_gaps: third,
        r_z0: at_zero.r2,
        r_z0_bound: nf.powf(1.0 / (2.0 * nf - 2.0)),
        reciprocal_term_max,
        reciprocal_term_flagged: reciprocal_term_max > RECIPROCAL_BOUND,
    })
}

/// The free boundary `n`-catenoid: the unshifted profile cut at its
/// tangency heights `±z₀` and scaled into the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeBoundaryCatenoid {
    pub n: u32,
    /// `|γ(z₀)|`, the factor lengths are divided by.
    pub scale: f64,
    /// `z₀ / scale`
    pub boundary_height: f64,
    /// `r(z₀) / scale`
    pub boundary_radius: f64,
    /// `|z ṙ − r|` at the upper and lower boundary heights, after scaling.
    pub residual_top: f64,
    pub residual_bottom: f64,
    pub profile: CatenoidProfile,
}

pub fn free_boundary_catenoid(n: u32) -> Result<FreeBoundaryCatenoid> {
    let profile = CatenoidProfile::standard(n)?;
    let cert = profile.certificate(0.0)?;
    let scale = cert.z2.hypot(cert.r2);
    Ok(FreeBoundaryCatenoid {
        n,
        scale,
        boundary_height: cert.z2 / scale,
        boundary_radius: cert.r2 / scale,
        residual_top: cert.residual2 / scale,
        residual_bottom: cert.residual1 / scale,
        profile,
    })
}

impl FreeBoundaryCatenoid {
    /// `(r, ṙ)` of the scaled profile at height `z`.
    pub fn eval(&self, z: f64) -> Option<(f64, f64)> {
        self.profile.eval(z * self.scale).map(|(r, rdot)| (r / self.scale, rdot))
    }

    /// Waist radius `1/scale`.
    pub fn waist_radius(&self) -> f64 {
        1.0 / self.scale
    }

    /// `|γ|` at the upper boundary point.
    pub fn boundary_distance(&self) -> f64 {
        self.boundary_height.hypot(self.boundary_radius)
    }

    /// `count` samples of the scaled profile between the boundary heights.
    pub fn samples(&self, count: usize) -> Vec<ProfileSample> {
        symmetric_grid(self.boundary_height, count)
            .filter_map(|z| self.eval(z).map(|(r, rdot)| ProfileSample { z, r, rdot }))
            .collect()
    }

    /// Upper and lower boundary circles with outward conormals.
    pub fn boundary_circles(&self) -> Result<[BoundaryCircle; 2]> {
        let h = self.boundary_height;
        let circle = |z: f64| -> Result<BoundaryCircle> {
            let (r, rdot) = self.eval(z).ok_or(Error::DomainExceeded { requested: z, limit: h })?;
            BoundaryCircle::on_profile(self.n, z, r, rdot, Orientation::Outward)
        };
        Ok([circle(h)?, circle(-h)?])
    }

    pub fn waist_circle(&self) -> Result<BoundaryCircle> {
        BoundaryCircle::on_profile(self.n, 0.0, self.waist_radius(), 0.0, Orientation::Upward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catenary_roots_are_the_coth_fixed_point() {
        let (z1, z2) = tangency_roots(2, 0.0).unwrap();
        assert!((z2 - 1.199_678_640_257_733_8).abs() < 1e-10);
        assert!((z1 + z2).abs() < 1e-12);
    }

    #[test]
    fn negative_shift_rejected() {
        assert!(matches!(tangency_roots(2, -0.1), Err(Error::DomainError { .. })));
    }
}
