//! Rotationally symmetric minimal hypersurfaces of `R^{n+1}`.
//!
//! An `O(n)`-invariant hypersurface is generated by a profile `r(z) > 0`
//! over the axis. Minimality with the normalization `r(0) = 1`, `ṙ(0) = 0`
//! gives the first integral `1 + ṙ² = r^{2n−2}` and `r̈ = (n−1) r^{2n−3}`.
//! For `n = 2` this is the catenary `r = cosh z`; for `n > 2` the profile
//! blows up at the finite half width `z = ±T(n)`.
//!
//! The free boundary problem in the unit ball asks for a shift `c` and a
//! common radius `R` such that the shifted profile `γ(z) = (z, r(z − c))`
//! meets the sphere of radius `R` orthogonally at both ends. Orthogonality
//! at a height `z` means `z ṙ(z − c) = r(z − c)`.

mod reparam;
mod shift;

pub use reparam::{reparam_profile, ReparamProfile};
pub use shift::{
    free_boundary_catenoid, shift_certificate, tangency_roots, uniqueness_sweep, FreeBoundaryCatenoid,
    ShiftCertificate, UniquenessReport,
};

use alloc::vec::Vec;
use num_traits::Float;

use crate::ode::{integrate, DenseTrajectory, IvpProblem};
use crate::quad;
use crate::root::refine_root;
use crate::{Error, Result};

/// Nodes of the symmetric sampling grid of a profile.
pub const PROFILE_NODES: usize = 2048;
/// Fraction of the half width `T(n)` a profile may extend to.
pub const DOMAIN_BUDGET: f64 = 0.999;
/// Half width of the default `n = 2` profile window.
pub const CATENARY_WINDOW: f64 = 6.0;
const PROFILE_TOL: f64 = 1e-13;

fn check_dimension(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::DomainError { what: "n", value: n as f64 });
    }
    Ok(())
}

/// `T(n) = ∫₁^∞ dz / √(z^{2n−2} − 1)`, the height at which the normalized
/// profile blows up.
///
/// Evaluated as `∫₀¹ 2t^{n−3} / √(1 + t + … + t^{2n−3}) ds` with
/// `t = 1 − s²`, which removes both the endpoint singularity and the
/// infinite tail.
pub fn half_width(n: u32) -> Result<f64> {
    if n == 2 {
        return Err(Error::Unbounded);
    }
    check_dimension(n, 3)?;
    let k = 2 * n - 2;
    let integrand = |s: f64| {
        let t = 1.0 - s * s;
        let mut sum = 0.0;
        for _ in 0..k {
            sum = sum * t + 1.0;
        }
        2.0 * t.powi(n as i32 - 3) / sum.sqrt()
    };
    Ok(quad::integrate(integrand, 0.0, 1.0, 1e-15, 1e-15)?.value)
}

/// `T(n)` by direct quadrature of the raw integrand on `[1 + δ, Z]`, with
/// the piece near `z = 1` and the tail beyond `Z` integrated term by term
/// from their series expansions. Independent of [`half_width`].
pub fn half_width_raw(n: u32) -> Result<f64> {
    if n == 2 {
        return Err(Error::Unbounded);
    }
    check_dimension(n, 3)?;
    let k = 2 * n - 2;
    let kf = k as f64;
    let (delta, big) = (0.05, 2.0);
    let middle = quad::integrate(|z: f64| 1.0 / (z.powi(k as i32) - 1.0).sqrt(), 1.0 + delta, big, 1e-15, 1e-15)?;

    // z^k − 1 = k w (1 + Σ P_j w^j), w = z − 1; expand its −1/2 power.
    const TERMS: usize = 60;
    let mut p = [0.0; TERMS];
    for (j, pj) in p.iter_mut().enumerate().skip(1) {
        if j < k as usize {
            *pj = binomial(k, j as u32 + 1) / kf;
        }
    }
    let mut q = [0.0; TERMS];
    q[0] = 1.0;
    for m in 1..TERMS {
        let mut acc = 0.0;
        for j in 1..=m {
            acc += (0.5 * j as f64 - m as f64) * p[j] * q[m - j];
        }
        q[m] = acc / m as f64;
    }
    let endpoint: f64 = (0..TERMS)
        .map(|m| {
            let e = m as f64 + 0.5;
            q[m] * delta.powf(e) / e
        })
        .sum::<f64>()
        / kf.sqrt();

    // (z^k − 1)^{−1/2} = Σ C(2j, j)/4^j · z^{−k/2 − jk}
    let mut tail = 0.0;
    let mut c = 1.0;
    for j in 0..TERMS {
        let e = 0.5 * kf + j as f64 * kf - 1.0;
        tail += c * big.powf(-e) / e;
        c *= (2 * j + 1) as f64 / (2 * j + 2) as f64;
    }
    Ok(endpoint + middle.value + tail)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The critical catenoid `r = cosh(τz)/τ` in the unit ball of `R³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CritCatParams {
    /// Positive root of `z = coth z`.
    pub sigma: f64,
    /// `σ cosh σ`
    pub tau: f64,
}

impl CritCatParams {
    pub fn radius_at(&self, z: f64) -> f64 {
        (self.tau * z).cosh() / self.tau
    }

    pub fn slope_at(&self, z: f64) -> f64 {
        (self.tau * z).sinh()
    }

    /// Height `σ/τ` of the upper boundary circle.
    pub fn boundary_height(&self) -> f64 {
        self.sigma / self.tau
    }

    /// `|z ṙ − r|` at the upper boundary height.
    pub fn tangency_residual(&self) -> f64 {
        let z = self.boundary_height();
        (z * self.slope_at(z) - self.radius_at(z)).abs()
    }

    /// `count` samples `(z, r, ṙ)` between the boundary heights.
    pub fn samples(&self, count: usize) -> Vec<ProfileSample> {
        let h = self.boundary_height();
        symmetric_grid(h, count).map(|z| ProfileSample { z, r: self.radius_at(z), rdot: self.slope_at(z) }).collect()
    }
}

pub fn critical_catenoid() -> CritCatParams {
    let sigma = refine_root(|x| 1.0 / x.tanh() - x, (1.0, 2.0), 1e-15).expect("coth x − x changes sign on [1, 2]");
    CritCatParams { sigma, tau: sigma * sigma.cosh() }
}

fn symmetric_grid(half: f64, count: usize) -> impl Iterator<Item = f64> {
    let last = (count.max(2) - 1) as f64;
    (0..count.max(2)).map(move |j| {
        let s = 2.0 * j as f64 / last - 1.0;
        // exact mirror images
        if s < 0.0 {
            -(half * -s)
        } else {
            half * s
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub z: f64,
    pub r: f64,
    pub rdot: f64,
}

/// The normalized profile `r(z)`, `r(0) = 1`, `ṙ(0) = 0`, on `[−w, w]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatenoidProfile {
    n: u32,
    half_width: f64,
    samples: Vec<ProfileSample>,
    upper: DenseTrajectory,
    lower: DenseTrajectory,
}

/// Integrate `r̈ = (n−1) r^{2n−3}` from `z = 0` up to `±z_max`, each
/// direction separately, and sample on [`PROFILE_NODES`] symmetric nodes.
pub fn solve_profile(n: u32, z_max: f64, tol: f64) -> Result<CatenoidProfile> {
    check_dimension(n, 2)?;
    if !(z_max > 0.0 && z_max.is_finite()) {
        return Err(Error::DomainError { what: "z_max", value: z_max });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive"));
    }
    if n > 2 {
        let limit = DOMAIN_BUDGET * half_width(n)?;
        if z_max > limit {
            return Err(Error::DomainExceeded { requested: z_max, limit });
        }
    }
    let power = 2 * n as i32 - 3;
    let k = (n - 1) as f64;
    let rhs = move |_z: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = k * y[0].powi(power);
    };
    let run = |end: f64| -> Result<DenseTrajectory> {
        let problem = IvpProblem::new(rhs, 0.0, alloc::vec![1.0, 0.0], end).tolerances(tol, tol);
        Ok(integrate(&problem, &[])?.trajectory)
    };
    let upper = run(z_max)?;
    let lower = run(-z_max)?;
    let mut profile = CatenoidProfile { n, half_width: z_max, samples: Vec::new(), upper, lower };
    profile.samples = symmetric_grid(z_max, PROFILE_NODES)
        .map(|z| {
            let (r, rdot) = profile.eval(z).expect("grid lies in the window");
            ProfileSample { z, r, rdot }
        })
        .collect();
    Ok(profile)
}

/// Default window: [`CATENARY_WINDOW`] for `n = 2`, the domain budget of
/// `T(n)` otherwise.
pub fn default_window(n: u32) -> Result<f64> {
    check_dimension(n, 2)?;
    if n == 2 {
        Ok(CATENARY_WINDOW)
    } else {
        Ok(DOMAIN_BUDGET * half_width(n)?)
    }
}

impl CatenoidProfile {
    /// Profile on the default window at the default tolerance.
    pub fn standard(n: u32) -> Result<Self> {
        solve_profile(n, default_window(n)?, PROFILE_TOL)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Half width `w` of the covered window `[−w, w]`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Always true: profiles are normalized by `r(0) = 1`, `ṙ(0) = 0`.
    pub fn is_normalized(&self) -> bool {
        true
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    /// `(r, ṙ)` at height `z`, or `None` outside the window.
    pub fn eval(&self, z: f64) -> Option<(f64, f64)> {
        let mut y = [0.0; 2];
        let traj = if z >= 0.0 { &self.upper } else { &self.lower };
        traj.eval_into(z, &mut y).then_some((y[0], y[1]))
    }

    /// `max |1 + ṙ² − r^{2n−2}|` over the samples.
    pub fn first_integral_defect(&self) -> f64 {
        let p = 2 * self.n as i32 - 2;
        self.samples.iter().map(|s| (1.0 + s.rdot * s.rdot - s.r.powi(p)).abs()).fold(0.0, f64::max)
    }

    /// The same defect divided by `r^{2n−2}`.
    pub fn relative_first_integral_defect(&self) -> f64 {
        let p = 2 * self.n as i32 - 2;
        self.samples
            .iter()
            .map(|s| {
                let big = s.r.powi(p);
                (1.0 + s.rdot * s.rdot - big).abs() / big
            })
            .fold(0.0, f64::max)
    }

    /// `max |r(z) − r(−z)|` over mirrored sample pairs.
    pub fn symmetry_defect(&self) -> f64 {
        let s = &self.samples;
        (0..s.len() / 2).map(|i| (s[i].r - s[s.len() - 1 - i].r).abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(10, 3), 120.0);
    }

    #[test]
    fn quartic_half_width() {
        // oracle: mpmath quad of ∫₀¹ dt/√(1−t⁴)
        let t = half_width(3).unwrap();
        assert!((t - 1.311_028_777_146_059_9).abs() < 1e-12, "{t}");
    }

    #[test]
    fn routes_agree() {
        for n in 3..=10 {
            let (a, b) = (half_width(n).unwrap(), half_width_raw(n).unwrap());
            assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn unbounded_catenary() {
        assert_eq!(half_width(2), Err(Error::Unbounded));
        assert_eq!(half_width_raw(2), Err(Error::Unbounded));
    }

    #[test]
    fn catenary_profile() {
        let p = solve_profile(2, 3.0, 1e-13).unwrap();
        let worst = p.samples().iter().map(|s| (s.r - s.z.cosh()).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn blow_up_guard() {
        let t = half_width(4).unwrap();
        assert!(matches!(solve_profile(4, t, 1e-12), Err(Error::DomainExceeded { .. })));
    }

    #[test]
    fn critical_parameters() {
        let c = critical_catenoid();
        assert!((1.0 / c.sigma.tanh() - c.sigma).abs() < 1e-12);
        assert!((c.tau - 2.171_622_980_887_501_5).abs() < 1e-9);
        assert!(c.tangency_residual() < 1e-10);
    }
}
