use alloc::vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_traits::Float;

use super::field::AngularState;
use super::trajectory::{chart_rhs, Chart, CrossingEvent, CrossingKind, ProfileTrajectory};
use super::OrbitParams;
use crate::error::ExitReason;
use crate::ode::{integrate, DenseTrajectory, EventSpec, IvpProblem, Stop};
use crate::root::{first_sign_change, refine_root};
use crate::{Error, Result};

/// Number of uniformly spaced `ε` values scanned for a sign change.
pub const EPS_SCAN_SAMPLES: usize = 64;
/// Scanned interval `[EPS_MARGIN, π − EPS_MARGIN]`.
const EPS_MARGIN: f64 = 0.01;
/// Distance from the quadrant edges at which a curve counts as having left.
const EDGE: f64 = 1e-8;

/// Scan density and tolerances of the annulus shooting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusOptions {
    /// Uniform `ε` samples scanned for a sign change of the gap.
    pub scan_samples: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bracket width at which `ε̄` is accepted.
    pub root_tol: f64,
}

impl Default for AnnulusOptions {
    fn default() -> Self {
        AnnulusOptions { scan_samples: EPS_SCAN_SAMPLES, abs_tol: 1e-12, rel_tol: 1e-12, root_tol: 1e-14 }
    }
}

impl AnnulusOptions {
    fn validate(&self) -> Result<()> {
        if self.scan_samples < 2 {
            return Err(Error::InvalidInput("at least two scan samples are needed"));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.root_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive"));
        }
        Ok(())
    }
}

/// One shot from `(|γ|, φ, θ) = (R, α, α − ε)` in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusShot {
    pub eps: f64,
    /// First time `θ − φ = −π` going backwards.
    pub t_minus: f64,
    /// First time `θ − φ = 0` going forwards.
    pub t_plus: f64,
    pub r_minus: f64,
    pub r_plus: f64,
    /// `|γ/|γ| + γ'|` at `t₋`, where `−γ'` is the outward conormal.
    pub residual_minus: f64,
    /// `|γ/|γ| − γ'|` at `t₊`.
    pub residual_plus: f64,
    pub trajectory: ProfileTrajectory,
}

impl AnnulusShot {
    /// `r₋ − r₊`, whose zero selects the free boundary annulus.
    pub fn gap(&self) -> f64 {
        self.r_minus - self.r_plus
    }
}

fn half_shot(
    params: OrbitParams,
    start: &AngularState,
    horizon: f64,
    target: f64,
    opts: &AnnulusOptions,
) -> Result<(DenseTrajectory, AngularState, f64)> {
    let chart = Chart::Angular;
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| chart_rhs(params, chart, y, dy);
    let problem = IvpProblem::new(rhs, 0.0, vec![start.r, start.phi, start.theta], horizon)
        .tolerances(opts.abs_tol, opts.rel_tol);
    let events = [
        EventSpec::new(move |_t, y: &[f64]| y[2] - y[1] - target).terminal(),
        EventSpec::new(|_t, y: &[f64]| y[1] - EDGE).falling().terminal(),
        EventSpec::new(|_t, y: &[f64]| FRAC_PI_2 - EDGE - y[1]).falling().terminal(),
    ];
    let sol = integrate(&problem, &events).map_err(|e| match e {
        Error::StepSizeUnderflow { .. } => Error::EventNotFound(ExitReason::Singular),
        other => other,
    })?;
    match sol.stop {
        Stop::Event(0) => {
            let hit = sol.events_of(0).next().expect("terminal event recorded");
            let (s, t) = (chart.to_angular(&hit.state), hit.time);
            Ok((sol.trajectory, s, t))
        }
        Stop::Event(1) => Err(Error::EventNotFound(ExitReason::AxisX)),
        Stop::Event(_) => Err(Error::EventNotFound(ExitReason::AxisY)),
        Stop::Horizon => Err(Error::EventNotFound(ExitReason::Horizon)),
    }
}

/// Shoot from the cone line at radius `radius` with tangent angle `α − ε`.
pub fn shoot_annulus(params: OrbitParams, radius: f64, eps: f64) -> Result<AnnulusShot> {
    shoot_annulus_with(params, radius, eps, &AnnulusOptions::default())
}

pub fn shoot_annulus_with(params: OrbitParams, radius: f64, eps: f64, opts: &AnnulusOptions) -> Result<AnnulusShot> {
    opts.validate()?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::DomainError { what: "R", value: radius });
    }
    if !(eps > 0.0 && eps < PI) {
        return Err(Error::DomainError { what: "eps", value: eps });
    }
    let alpha = params.alpha();
    let start = AngularState::new(radius, alpha, alpha - eps);
    let reach = 1e4 * radius;
    let (forward, plus, t_plus) = half_shot(params, &start, reach, 0.0, opts)?;
    let (backward, minus, t_minus) = half_shot(params, &start, -reach, -PI, opts)?;
    let residual = |s: &AngularState, sign: f64| {
        let (p, v) = (s.point(), s.tangent());
        (p.0 / s.r - sign * v.0).hypot(p.1 / s.r - sign * v.1)
    };
    let crossings = vec![
        CrossingEvent { kind: CrossingKind::Reversed, time: t_minus, state: minus },
        CrossingEvent { kind: CrossingKind::Aligned, time: t_plus, state: plus },
    ];
    let trajectory = ProfileTrajectory::new(
        params,
        vec![(Chart::Angular, backward), (Chart::Angular, forward)],
        crossings,
        opts.rel_tol,
    );
    Ok(AnnulusShot {
        eps,
        t_minus,
        t_plus,
        r_minus: minus.r,
        r_plus: plus.r,
        residual_minus: residual(&minus, -1.0),
        residual_plus: residual(&plus, 1.0),
        trajectory,
    })
}

/// The free boundary annulus: the shot whose two end radii agree, rescaled
/// so both ends lie on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusSolution {
    pub params: OrbitParams,
    pub radius: f64,
    pub eps_bar: f64,
    /// `r₋ − r₊` at `ε̄`, before rescaling.
    pub gap: f64,
    /// End times on the rescaled curve.
    pub t_minus: f64,
    pub t_plus: f64,
    /// `|γ(t₋)|` before rescaling.
    pub r_minus: f64,
    pub r_plus: f64,
    pub residual_minus: f64,
    pub residual_plus: f64,
    /// Rescaled curve on `[t₋, t₊]`.
    pub trajectory: ProfileTrajectory,
}

impl AnnulusSolution {
    /// Largest `|γ|` over the rescaled curve's nodes.
    pub fn max_radius(&self) -> f64 {
        self.trajectory.nodes().iter().map(|(_, s)| s.r).fold(0.0, f64::max)
    }
}

pub fn solve_annulus(params: OrbitParams, radius: f64) -> Result<AnnulusSolution> {
    solve_annulus_with(params, radius, &AnnulusOptions::default())
}

pub fn solve_annulus_with(params: OrbitParams, radius: f64, opts: &AnnulusOptions) -> Result<AnnulusSolution> {
    if params.is_oscillatory() {
        return Err(Error::WrongRegime { m: params.m(), n: params.n() });
    }
    opts.validate()?;
    let g = |eps: f64| shoot_annulus_with(params, radius, eps, opts).map(|s| s.gap()).unwrap_or(f64::NAN);
    let bracket = first_sign_change(g, EPS_MARGIN, PI - EPS_MARGIN, opts.scan_samples).ok_or(Error::BracketNotFound)?;
    let eps_bar = refine_root(g, bracket, opts.root_tol)?;
    let shot = shoot_annulus_with(params, radius, eps_bar, opts)?;
    let scale = shot.r_minus;
    Ok(AnnulusSolution {
        params,
        radius,
        eps_bar,
        gap: shot.gap(),
        t_minus: shot.t_minus / scale,
        t_plus: shot.t_plus / scale,
        r_minus: shot.r_minus,
        r_plus: shot.r_plus,
        residual_minus: shot.residual_minus,
        residual_plus: shot.residual_plus,
        trajectory: shot.trajectory.rescaled(scale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: u32, n: u32) -> OrbitParams {
        OrbitParams::new(m, n).unwrap()
    }

    #[test]
    fn symmetric_pair_balances_at_right_angle() {
        let shot = shoot_annulus(p(4, 4), 0.5, FRAC_PI_2).unwrap();
        assert!((shot.r_minus - shot.r_plus).abs() < 1e-9, "{}", shot.gap());
    }

    #[test]
    fn gap_changes_sign() {
        let lo = shoot_annulus(p(9, 3), 0.5, 0.05).unwrap().gap();
        let hi = shoot_annulus(p(9, 3), 0.5, PI - 0.05).unwrap().gap();
        assert!(lo < 0.0 && hi > 0.0, "{lo} {hi}");
    }

    #[test]
    fn regime_guard() {
        assert!(matches!(solve_annulus(p(2, 2), 0.5), Err(Error::WrongRegime { .. })));
        assert!(shoot_annulus(p(9, 3), 0.5, 0.0).is_err());
    }
}
