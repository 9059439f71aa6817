use core::f64::consts::{FRAC_PI_2, PI};

use num_traits::Float;

use super::OrbitParams;
use crate::{Error, Result};

/// The planar field `V(φ, θ) = (V¹, V²)`.
pub fn v_field(params: OrbitParams, phi: f64, theta: f64) -> (f64, f64) {
    let (a, b) = coefficients(params);
    let v1 = (2.0 * phi).sin() * (theta - phi).sin();
    let v2 = 2.0 * (a * theta.cos() * phi.cos() - b * theta.sin() * phi.sin());
    (v1, v2)
}

/// `(n − 1, m − 1)`.
fn coefficients(params: OrbitParams) -> (f64, f64) {
    ((params.n() - 1) as f64, (params.m() - 1) as f64)
}

/// `V²` written in the deviations `u = φ − α`, `v = θ − α` from the focus
/// `p₁`, so that it keeps full relative precision when `u` and `v` are tiny.
///
/// Uses `(n−1) cos θ cos φ − (m−1) sin θ sin φ
///        = −(n−m) sin²((v−u)/2) − (m+n−2) sin(2α + (u+v)/2) sin((u+v)/2)`.
pub(crate) fn v2_from_deviation(params: OrbitParams, alpha: f64, u: f64, v: f64) -> f64 {
    let (a, b) = coefficients(params);
    let half_diff = 0.5 * (v - u);
    let half_sum = 0.5 * (u + v);
    let s = half_diff.sin();
    2.0 * (-(a - b) * s * s - (a + b) * (2.0 * alpha + half_sum).sin() * half_sum.sin())
}

/// The four curves on which a component of `V` vanishes, evaluated at one `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nullclines {
    /// `Θ¹₁(φ) = φ`
    pub v1_upper: f64,
    /// `Θ¹₂(φ) = φ − π`
    pub v1_lower: f64,
    /// `Θ²₁(φ) = arctan((n−1)/(m−1) · cot φ)`
    pub v2_upper: f64,
    /// `Θ²₂(φ) = Θ²₁(φ) − π`
    pub v2_lower: f64,
}

pub fn nullclines(params: OrbitParams, phi: f64) -> Result<Nullclines> {
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::DomainError { what: "phi", value: phi });
    }
    let (a, b) = coefficients(params);
    let upper = (a / b / phi.tan()).atan();
    Ok(Nullclines { v1_upper: phi, v1_lower: phi - PI, v2_upper: upper, v2_lower: upper - PI })
}

/// Analytic Jacobian `∂(V¹, V²)/∂(φ, θ)`.
pub fn jacobian(params: OrbitParams, phi: f64, theta: f64) -> [[f64; 2]; 2] {
    let (a, b) = coefficients(params);
    let d = theta - phi;
    let (s2, c2) = ((2.0 * phi).sin(), (2.0 * phi).cos());
    let (sp, cp, st, ct) = (phi.sin(), phi.cos(), theta.sin(), theta.cos());
    [
        [2.0 * c2 * d.sin() - s2 * d.cos(), s2 * d.cos()],
        [-2.0 * (a * ct * sp + b * st * cp), -2.0 * (a * st * cp + b * ct * sp)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Focal,
    Nodal,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Focal => "focal",
            Classification::Nodal => "nodal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityReport {
    pub params: OrbitParams,
    /// `(φ, θ)` of `p₁ = (α, α)`
    pub p1: (f64, f64),
    /// `(φ, θ)` of `p₂ = (α, α − π)`
    pub p2: (f64, f64),
    pub jacobian: [[f64; 2]; 2],
    /// Eigenvalues of the Jacobian at `p₁` as `(re, im)` pairs.
    pub eigenvalues: [(f64, f64); 2],
    pub classification: Classification,
}

impl SingularityReport {
    /// `max |V|` over both singular points.
    pub fn field_residual(&self) -> f64 {
        let (a1, a2) = v_field(self.params, self.p1.0, self.p1.1);
        let (b1, b2) = v_field(self.params, self.p2.0, self.p2.1);
        a1.abs().max(a2.abs()).max(b1.abs()).max(b2.abs())
    }
}

pub fn singular_points(params: OrbitParams) -> SingularityReport {
    let alpha = params.alpha();
    let j = jacobian(params, alpha, alpha);
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    let (eigenvalues, classification) = if disc < 0.0 {
        let im = 0.5 * (-disc).sqrt();
        ([(0.5 * tr, im), (0.5 * tr, -im)], Classification::Focal)
    } else {
        let root = 0.5 * disc.sqrt();
        ([(0.5 * tr + root, 0.0), (0.5 * tr - root, 0.0)], Classification::Nodal)
    };
    SingularityReport { params, p1: (alpha, alpha), p2: (alpha, alpha - PI), jacobian: j, eigenvalues, classification }
}

/// A point of a profile curve: radius `r = |γ|`, polar angle `φ` of `γ`, and
/// direction `θ` of `γ'`. `θ` is an unwrapped real, not reduced mod `2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularState {
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
}

impl AngularState {
    pub fn new(r: f64, phi: f64, theta: f64) -> Self {
        AngularState { r, phi, theta }
    }

    /// `θ − φ`, the angle between `γ'` and `γ`.
    pub fn delta(&self) -> f64 {
        self.theta - self.phi
    }

    /// `(x, y) = (r cos φ, r sin φ)`.
    pub fn point(&self) -> (f64, f64) {
        (self.r * self.phi.cos(), self.r * self.phi.sin())
    }

    /// Unit tangent `(cos θ, sin θ)`.
    pub fn tangent(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }

    fn check(&self) -> Result<()> {
        if !(self.r > 0.0) {
            return Err(Error::SingularConfiguration("r must be positive"));
        }
        if !(self.phi > 0.0 && self.phi < FRAC_PI_2) {
            return Err(Error::SingularConfiguration("phi must lie in (0, pi/2)"));
        }
        Ok(())
    }
}

/// Arclength derivatives `(r', φ', θ')` of the reduced profile system.
pub fn reduced_rhs(params: OrbitParams, state: &AngularState) -> Result<[f64; 3]> {
    state.check()?;
    let AngularState { r, phi, theta } = *state;
    let d = theta - phi;
    let (_, v2) = v_field(params, phi, theta);
    Ok([d.cos(), d.sin() / r, v2 / (r * (2.0 * phi).sin())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    fn p(m: u32, n: u32) -> OrbitParams {
        OrbitParams::new(m, n).unwrap()
    }

    #[test]
    fn field_zeros_for_clifford_pair() {
        let (a, b) = v_field(p(2, 2), FRAC_PI_4, FRAC_PI_4);
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        let (a, b) = v_field(p(2, 2), FRAC_PI_4, -3.0 * FRAC_PI_4);
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        for phi in [0.1, 0.7, 1.3] {
            assert_eq!(v_field(p(5, 3), phi, phi).0, 0.0);
        }
    }

    #[test]
    fn nullcline_values() {
        let nc = nullclines(p(2, 2), FRAC_PI_4).unwrap();
        assert!((nc.v1_upper - FRAC_PI_4).abs() < 1e-15);
        assert!((nc.v1_lower + 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!((nc.v2_upper - FRAC_PI_4).abs() < 1e-15);
        assert!((nc.v2_lower + 3.0 * FRAC_PI_4).abs() < 1e-15);
        // arctan((1/3) cot(π/6)) = arctan(√3/3) = π/6
        let nc = nullclines(p(4, 2), PI / 6.0).unwrap();
        assert!((nc.v2_upper - PI / 6.0).abs() < 1e-14);
        assert!(nullclines(p(2, 2), 0.0).is_err());
        assert!(nullclines(p(2, 2), FRAC_PI_2).is_err());
    }

    #[test]
    fn second_component_vanishes_on_its_nullclines() {
        for (m, n) in [(2, 2), (3, 5), (9, 3), (12, 2)] {
            for k in 1..20 {
                let phi = k as f64 * FRAC_PI_2 / 20.0;
                let nc = nullclines(p(m, n), phi).unwrap();
                assert!(v_field(p(m, n), phi, nc.v2_upper).1.abs() < 1e-12);
                assert!(v_field(p(m, n), phi, nc.v2_lower).1.abs() < 1e-12);
                assert!(v_field(p(m, n), phi, nc.v1_lower).0.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn clifford_singularity_is_a_focus() {
        let rep = singular_points(p(2, 2));
        let j = rep.jacobian;
        let expect = [[-1.0, 1.0], [-2.0, -2.0]];
        for i in 0..2 {
            for k in 0..2 {
                assert!((j[i][k] - expect[i][k]).abs() < 1e-14);
            }
        }
        assert_eq!(rep.classification, Classification::Focal);
        assert!((rep.eigenvalues[0].0 + 1.5).abs() < 1e-14);
        assert!((rep.eigenvalues[0].1 - 7f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn eight_dimensional_cases_are_nodes() {
        let rep = singular_points(p(4, 4));
        let expect = [[-1.0, 1.0], [-6.0, -6.0]];
        for i in 0..2 {
            for k in 0..2 {
                assert!((rep.jacobian[i][k] - expect[i][k]).abs() < 1e-13);
            }
        }
        assert_eq!(rep.classification, Classification::Nodal);
        // eigenvalues -3 and -4
        assert!((rep.eigenvalues[0].0 + 3.0).abs() < 1e-12);
        assert!((rep.eigenvalues[1].0 + 4.0).abs() < 1e-12);
        assert_eq!(singular_points(p(9, 3)).classification, Classification::Nodal);
    }

    #[test]
    fn deviation_form_matches_direct_form() {
        let params = p(3, 5);
        let alpha = params.alpha();
        for i in 0..30 {
            let phi = 0.05 + 1.4 * i as f64 / 30.0;
            for j in 0..30 {
                let theta = -3.0 + 6.0 * j as f64 / 30.0;
                let direct = v_field(params, phi, theta).1;
                let dev = v2_from_deviation(params, alpha, phi - alpha, theta - alpha);
                assert!((direct - dev).abs() < 1e-13, "{phi} {theta}");
            }
        }
    }

    #[test]
    fn cone_line_is_a_solution() {
        let d = reduced_rhs(p(2, 2), &AngularState::new(1.0, FRAC_PI_4, FRAC_PI_4)).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-15 && d[1].abs() < 1e-15 && d[2].abs() < 1e-15);
    }

    #[test]
    fn perpendicular_direction() {
        let s = AngularState::new(2.0, 0.4, 0.4 + FRAC_PI_2);
        let d = reduced_rhs(p(3, 2), &s).unwrap();
        assert!(d[0].abs() < 1e-15);
        assert!((d[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singular_configurations() {
        for s in
            [AngularState::new(1.0, 0.0, 1.0), AngularState::new(1.0, FRAC_PI_2, 1.0), AngularState::new(0.0, 0.5, 1.0)]
        {
            assert!(matches!(reduced_rhs(p(2, 2), &s), Err(Error::SingularConfiguration(_))));
        }
    }
}
