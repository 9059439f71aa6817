use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_traits::Float;

use super::field::AngularState;
use super::trajectory::{chart_rhs, Chart, CrossingEvent, CrossingKind, ProfileTrajectory};
use super::OrbitParams;
use crate::ode::{integrate, EventSpec, IvpProblem};
use crate::{Error, Result};

/// Largest state change tolerated when the series start time is halved.
const REGULARIZATION_LIMIT: f64 = 1e-6;

/// How curves leaving the x-axis orthogonally are launched and how far they
/// are followed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisStart {
    /// Axis intercept `γ(0) = (x0, 0)`.
    pub x0: f64,
    /// Series start time as a multiple of `x0`.
    pub t_eps_factor: f64,
    /// Integration stops once `r` reaches this value.
    pub radius_cap: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for AxisStart {
    fn default() -> Self {
        AxisStart { x0: 1.0, t_eps_factor: 1e-6, radius_cap: 1e12, abs_tol: 1e-12, rel_tol: 1e-12 }
    }
}

impl AxisStart {
    /// State at arclength `t` of the curve through `(x0, 0)` with vertical
    /// tangent, to first order in `t`.
    pub fn series_state(&self, params: OrbitParams, t: f64) -> AngularState {
        let x0 = self.x0;
        let slope = (params.m() - 1) as f64 / (params.n() as f64 * x0);
        AngularState::new(x0.hypot(t), t / x0, FRAC_PI_2 - slope * t)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::DomainError { what: "x0", value: self.x0 });
        }
        if !(self.t_eps_factor > 0.0 && self.t_eps_factor < 0.1) {
            return Err(Error::DomainError { what: "t_eps", value: self.t_eps_factor });
        }
        if !(self.radius_cap > self.x0) {
            return Err(Error::DomainError { what: "radius cap", value: self.radius_cap });
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive"));
        }
        Ok(())
    }
}

/// Integrate from the series start at `t_eps` until `t_end`, the radius cap,
/// or `max_crossings` crossings of `θ = φ`.
fn shoot(
    params: OrbitParams,
    start: &AxisStart,
    t_eps: f64,
    t_end: f64,
    max_crossings: Option<usize>,
) -> Result<ProfileTrajectory> {
    let chart = Chart::FocalPolar { alpha: params.alpha() };
    let y0 = chart.from_angular(&start.series_state(params, t_eps));
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| chart_rhs(params, chart, y, dy);
    let problem = IvpProblem::new(rhs, t_eps, y0.to_vec(), t_end).tolerances(start.abs_tol, start.rel_tol);
    let cap = start.radius_cap;
    let mut crossing = EventSpec::new(|_t, y: &[f64]| (y[2] - FRAC_PI_4).sin());
    if let Some(k) = max_crossings {
        crossing = crossing.stop_after(k);
    }
    let events = [crossing, EventSpec::new(move |_t, y: &[f64]| y[0] - cap).rising().terminal()];
    let sol = integrate(&problem, &events)?;
    let crossings = sol
        .events_of(0)
        .map(|e| CrossingEvent { kind: CrossingKind::Aligned, time: e.time, state: chart.to_angular(&e.state) })
        .collect();
    Ok(ProfileTrajectory::new(params, vec![(chart, sol.trajectory)], crossings, start.rel_tol))
}

/// Time bound comfortably beyond reaching the radius cap.
fn time_horizon(start: &AxisStart) -> f64 {
    16.0 * (start.radius_cap + start.x0)
}

fn regularization_check(params: OrbitParams, start: &AxisStart, t_eps: f64) -> Result<()> {
    let checkpoint = 0.5 * start.x0;
    let mut previous: Option<AngularState> = None;
    for halvings in 0..3 {
        let t = t_eps / (1u32 << halvings) as f64;
        let traj = shoot(params, start, t, checkpoint, None)?;
        let s = traj.state_at(checkpoint).ok_or(Error::HorizonReached { t: checkpoint })?;
        if let Some(p) = previous {
            let change = (s.r - p.r).abs().max((s.phi - p.phi).abs()).max((s.theta - p.theta).abs());
            if !(change < REGULARIZATION_LIMIT) {
                return Err(Error::RegularizationDiverged { change });
            }
        }
        previous = Some(s);
    }
    Ok(())
}

/// The profile curve leaving the x-axis orthogonally at `(x0, 0)`, started
/// from its series expansion at arclength `t_eps` and followed until
/// `r = radius_cap`. All crossings of `θ = φ` are recorded.
pub fn integrate_from_axis(params: OrbitParams, x0: f64, t_eps: f64, radius_cap: f64) -> Result<ProfileTrajectory> {
    let start = AxisStart { x0, t_eps_factor: t_eps / x0, radius_cap, ..AxisStart::default() };
    start.validate()?;
    regularization_check(params, &start, t_eps)?;
    shoot(params, &start, t_eps, time_horizon(&start), None)
}

/// A member `Σ_{m,n,k}` of the family: the axis curve cut at its `k`-th
/// crossing of `θ = φ` and rescaled so the cut lies on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub params: OrbitParams,
    pub k: usize,
    /// Arclength of the cut on the rescaled curve.
    pub crossing_time: f64,
    /// `|γ(t_k)|` before rescaling.
    pub crossing_radius: f64,
    pub boundary_point: (f64, f64),
    pub boundary_tangent: (f64, f64),
    /// `|γ_k(t_k) − γ_k'(t_k)|`
    pub residual: f64,
    /// Rescaled curve on `[t_eps, t_k]`.
    pub trajectory: ProfileTrajectory,
}

impl FamilyMember {
    /// Largest `|γ_k|` over nodes strictly before the cut.
    pub fn max_interior_radius(&self) -> f64 {
        self.trajectory.nodes().iter().filter(|(t, _)| *t < self.crossing_time).map(|(_, s)| s.r).fold(0.0, f64::max)
    }
}

/// Members `k = 1..=k_max` cut from a single axis curve.
pub fn construct_family(params: OrbitParams, k_max: usize, start: &AxisStart) -> Result<Vec<FamilyMember>> {
    if !params.is_oscillatory() {
        return Err(Error::WrongRegime { m: params.m(), n: params.n() });
    }
    if k_max == 0 {
        return Err(Error::InvalidInput("k must be positive"));
    }
    start.validate()?;
    let t_eps = start.t_eps_factor * start.x0;
    regularization_check(params, start, t_eps)?;
    let curve = shoot(params, start, t_eps, time_horizon(start), Some(k_max + 2))?;
    let crossings = curve.crossings();
    if crossings.len() < k_max {
        return Err(Error::CrossingNotFound { wanted: k_max, found: crossings.len() });
    }
    Ok(crossings[..k_max]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let scale = c.state.r;
            let t_k = c.time / scale;
            let trajectory = curve.rescaled(scale).restricted(t_eps / scale, t_k);
            let s = AngularState::new(1.0, c.state.phi, c.state.theta);
            let p = s.point();
            let v = s.tangent();
            FamilyMember {
                params,
                k: i + 1,
                crossing_time: t_k,
                crossing_radius: scale,
                boundary_point: p,
                boundary_tangent: v,
                residual: (p.0 - v.0).hypot(p.1 - v.1),
                trajectory,
            }
        })
        .collect())
}

pub fn construct_family_member(params: OrbitParams, k: usize) -> Result<FamilyMember> {
    let mut members = construct_family(params, k, &AxisStart::default())?;
    Ok(members.pop().expect("k members were built"))
}

/// Largest distance to the cone line over the curve's samples with
/// `r ∈ [r_min, r_max]`. Nodes are supplemented by interpolated points.
pub fn cone_distance(trajectory: &ProfileTrajectory, r_min: f64, r_max: f64) -> Result<f64> {
    if !(r_min > 0.0 && r_min < r_max && r_max <= 1.0) {
        return Err(Error::InvalidInput("cone window must satisfy 0 < r_min < r_max <= 1"));
    }
    let alpha = trajectory.params().alpha();
    let mut worst: Option<f64> = None;
    for (_, s) in trajectory.dense_samples(8) {
        if s.r >= r_min && s.r <= r_max {
            let d = s.r * (s.phi - alpha).sin().abs();
            worst = Some(worst.map_or(d, |w: f64| w.max(d)));
        }
    }
    worst.ok_or(Error::EmptyWindow)
}
