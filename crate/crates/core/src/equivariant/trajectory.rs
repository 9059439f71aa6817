use alloc::vec::Vec;

use num_traits::Float;

use super::field::{reduced_rhs, v2_from_deviation, v_field, AngularState};
use super::OrbitParams;
use crate::ode::DenseTrajectory;

/// Coordinates a piece of a profile curve was integrated in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Chart {
    /// `(r, φ, θ)`
    Angular,
    /// `(r, L, ϑ)` with `(φ − α, θ − α) = e^L (cos ϑ, sin ϑ)`. Resolves
    /// curves spiralling into the cone line, whose deviation from it decays
    /// geometrically per turn.
    FocalPolar { alpha: f64 },
}

impl Chart {
    pub(crate) fn to_angular(self, y: &[f64]) -> AngularState {
        match self {
            Chart::Angular => AngularState::new(y[0], y[1], y[2]),
            Chart::FocalPolar { alpha } => {
                let rho = y[1].exp();
                AngularState::new(y[0], alpha + rho * y[2].cos(), alpha + rho * y[2].sin())
            }
        }
    }

    pub(crate) fn from_angular(self, s: &AngularState) -> [f64; 3] {
        match self {
            Chart::Angular => [s.r, s.phi, s.theta],
            Chart::FocalPolar { alpha } => {
                let (u, v) = (s.phi - alpha, s.theta - alpha);
                [s.r, u.hypot(v).ln(), v.atan2(u)]
            }
        }
    }
}

/// Arclength derivative of the profile state in the given chart. Written
/// without validation so the integrator can probe beyond the quadrant.
pub(crate) fn chart_rhs(params: OrbitParams, chart: Chart, y: &[f64], dy: &mut [f64]) {
    match chart {
        Chart::Angular => {
            let (r, phi, theta) = (y[0], y[1], y[2]);
            let d = theta - phi;
            dy[0] = d.cos();
            dy[1] = d.sin() / r;
            dy[2] = v_field(params, phi, theta).1 / (r * (2.0 * phi).sin());
        }
        Chart::FocalPolar { alpha } => {
            let (r, l, w) = (y[0], y[1], y[2]);
            let rho = l.exp();
            let (c, s) = (w.cos(), w.sin());
            let (u, v) = (rho * c, rho * s);
            let d = v - u;
            let du = d.sin() / r;
            let dv = v2_from_deviation(params, alpha, u, v) / (r * (2.0 * (alpha + u)).sin());
            dy[0] = d.cos();
            dy[1] = (c * du + s * dv) / rho;
            dy[2] = (c * dv - s * du) / rho;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    /// `θ − φ = 0`: the tangent points radially outward.
    Aligned,
    /// `θ − φ = −π`: the tangent points radially inward.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEvent {
    pub kind: CrossingKind,
    pub time: f64,
    pub state: AngularState,
}

/// A profile curve in the quadrant, parametrized by arclength, possibly
/// rescaled and restricted to a time window.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTrajectory {
    params: OrbitParams,
    // ordered by time, each piece covering its own interval
    pieces: Vec<(Chart, DenseTrajectory)>,
    // integration-time window, unscaled
    window: (f64, f64),
    scale: f64,
    // unscaled
    crossings: Vec<CrossingEvent>,
    tolerance: f64,
}

impl ProfileTrajectory {
    pub(crate) fn new(
        params: OrbitParams,
        pieces: Vec<(Chart, DenseTrajectory)>,
        crossings: Vec<CrossingEvent>,
        tolerance: f64,
    ) -> Self {
        let lo = pieces.iter().map(|p| p.1.span().0).fold(f64::INFINITY, f64::min);
        let hi = pieces.iter().map(|p| p.1.span().1).fold(f64::NEG_INFINITY, f64::max);
        let mut crossings = crossings;
        crossings.sort_by(|a, b| a.time.total_cmp(&b.time));
        ProfileTrajectory { params, pieces, window: (lo, hi), scale: 1.0, crossings, tolerance }
    }

    pub fn params(&self) -> OrbitParams {
        self.params
    }

    /// Factor all lengths (and arclengths) have been divided by.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Integration tolerance the curve was computed with.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The same curve with lengths divided by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.scale *= factor;
        out
    }

    /// The same curve restricted to arclength times in `[t0, t1]` (in the
    /// current scale).
    pub fn restricted(&self, t0: f64, t1: f64) -> Self {
        let mut out = self.clone();
        let (lo, hi) = (t0 * self.scale, t1 * self.scale);
        out.window = (self.window.0.max(lo), self.window.1.min(hi));
        out
    }

    /// Covered arclength interval.
    pub fn span(&self) -> (f64, f64) {
        (self.window.0 / self.scale, self.window.1 / self.scale)
    }

    fn scaled(&self, s: AngularState) -> AngularState {
        AngularState::new(s.r / self.scale, s.phi, s.theta)
    }

    /// State at arclength `t`, from the dense interpolant.
    pub fn state_at(&self, t: f64) -> Option<AngularState> {
        self.raw_state(t * self.scale).map(|s| self.scaled(s))
    }

    fn raw_state(&self, tu: f64) -> Option<AngularState> {
        if tu < self.window.0 || tu > self.window.1 {
            return None;
        }
        let mut buf = [0.0; 3];
        for (chart, traj) in &self.pieces {
            if traj.eval_into(tu, &mut buf) {
                return Some(chart.to_angular(&buf));
            }
        }
        None
    }

    /// `(x, y) = (r cos φ, r sin φ)` at arclength `t`.
    pub fn cartesian(&self, t: f64) -> Option<(f64, f64)> {
        self.state_at(t).map(|s| s.point())
    }

    /// Stored integration nodes inside the window, in increasing time,
    /// together with the window end points.
    pub fn nodes(&self) -> Vec<(f64, AngularState)> {
        let (lo, hi) = self.window;
        let mut out: Vec<(f64, AngularState)> = Vec::new();
        for (chart, traj) in &self.pieces {
            for (t, y) in traj.nodes() {
                if t > lo && t < hi {
                    out.push((t, chart.to_angular(y)));
                }
            }
        }
        for t in [lo, hi] {
            if let Some(s) = self.raw_state(t) {
                out.push((t, s));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.dedup_by(|a, b| a.0 == b.0);
        out.into_iter().map(|(t, s)| (t / self.scale, self.scaled(s))).collect()
    }

    /// Nodes plus `per_step − 1` interpolated points inside every step.
    pub fn dense_samples(&self, per_step: usize) -> Vec<(f64, AngularState)> {
        let nodes = self.nodes();
        let per_step = per_step.max(1);
        let mut out = Vec::with_capacity(nodes.len() * per_step);
        for w in nodes.windows(2) {
            out.push(w[0]);
            for j in 1..per_step {
                let t = w[0].0 + (w[1].0 - w[0].0) * j as f64 / per_step as f64;
                if let Some(s) = self.state_at(t) {
                    out.push((t, s));
                }
            }
        }
        if let Some(last) = nodes.last() {
            out.push(*last);
        }
        out
    }

    /// Crossings of `θ − φ ∈ {0, −π}` inside the window.
    pub fn crossings(&self) -> Vec<CrossingEvent> {
        let (lo, hi) = self.window;
        self.crossings
            .iter()
            .filter(|c| c.time >= lo && c.time <= hi)
            .map(|c| CrossingEvent { kind: c.kind, time: c.time / self.scale, state: self.scaled(c.state) })
            .collect()
    }

    /// `max |(x')² + (y')² − 1|` over the nodes, with `(x', y')` assembled
    /// from the reduced system.
    pub fn unit_speed_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (_, s) in self.nodes() {
            let Ok(d) = reduced_rhs(self.params, &s) else { continue };
            let (c, sn) = (s.phi.cos(), s.phi.sin());
            let dx = d[0] * c - s.r * d[1] * sn;
            let dy = d[0] * sn + s.r * d[1] * c;
            worst = worst.max((dx * dx + dy * dy - 1.0).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_round_trip() {
        let chart = Chart::FocalPolar { alpha: 0.6 };
        let s = AngularState::new(3.0, 0.6 + 1e-9, 0.6 - 2e-9);
        let back = chart.to_angular(&chart.from_angular(&s));
        assert!((back.phi - s.phi).abs() < 1e-16 && (back.theta - s.theta).abs() < 1e-16);
    }

    #[test]
    fn charts_agree_on_the_field() {
        let params = OrbitParams::new(3, 2).unwrap();
        let alpha = params.alpha();
        let polar = Chart::FocalPolar { alpha };
        let s = AngularState::new(1.7, alpha + 0.2, alpha - 0.1);
        let mut da = [0.0; 3];
        chart_rhs(params, Chart::Angular, &[s.r, s.phi, s.theta], &mut da);
        let y = polar.from_angular(&s);
        let mut dp = [0.0; 3];
        chart_rhs(params, polar, &y, &mut dp);
        // chain rule back to (φ', θ')
        let rho = y[1].exp();
        let (c, sn) = (y[2].cos(), y[2].sin());
        let dphi = rho * (dp[1] * c - dp[2] * sn);
        let dtheta = rho * (dp[1] * sn + dp[2] * c);
        assert!((dp[0] - da[0]).abs() < 1e-15);
        assert!((dphi - da[1]).abs() < 1e-14);
        assert!((dtheta - da[2]).abs() < 1e-14);
    }
}
