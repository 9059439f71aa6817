use std::f64::consts::{FRAC_PI_2, PI};

use fbms_core::equivariant::{
    cone_distance, construct_family, construct_family_member, integrate_from_axis, jacobian, nullclines, reduced_rhs,
    shoot_annulus, singular_points, solve_annulus, v_field, AngularState, AxisStart, Classification, OrbitParams,
};
use fbms_core::ode::{integrate, IvpProblem};
use fbms_core::Error;
use proptest::prelude::*;

fn p(m: u32, n: u32) -> OrbitParams {
    OrbitParams::new(m, n).unwrap()
}

#[test]
fn field_vanishes_at_singular_points() {
    for m in 2..=12 {
        for n in 2..=12 {
            let rep = singular_points(p(m, n));
            assert!(rep.field_residual() < 1e-12, "({m},{n})");
        }
    }
}

#[test]
fn focal_exactly_below_dimension_eight() {
    for m in 2..=12 {
        for n in 2..=12 {
            let rep = singular_points(p(m, n));
            assert_eq!(rep.classification == Classification::Focal, m + n < 8, "({m},{n})");
            assert_eq!(rep.classification == Classification::Focal, rep.eigenvalues[0].1 != 0.0);
        }
    }
}

#[test]
fn jacobian_matches_central_differences() {
    let h = 1e-6;
    for m in 2..=12 {
        for n in 2..=12 {
            let params = p(m, n);
            let (phi, theta) = singular_points(params).p1;
            let j = jacobian(params, phi, theta);
            let dphi = {
                let (a, b) = (v_field(params, phi + h, theta), v_field(params, phi - h, theta));
                [(a.0 - b.0) / (2.0 * h), (a.1 - b.1) / (2.0 * h)]
            };
            let dtheta = {
                let (a, b) = (v_field(params, phi, theta + h), v_field(params, phi, theta - h));
                [(a.0 - b.0) / (2.0 * h), (a.1 - b.1) / (2.0 * h)]
            };
            let fd = [[dphi[0], dtheta[0]], [dphi[1], dtheta[1]]];
            let norm = j.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
            for i in 0..2 {
                for k in 0..2 {
                    assert!((j[i][k] - fd[i][k]).abs() <= 1e-6 * norm, "({m},{n}) [{i}][{k}]");
                }
            }
        }
    }
}

#[test]
fn nullcline_domain() {
    assert!(matches!(nullclines(p(2, 2), -0.1), Err(Error::DomainError { .. })));
}

fn run_angular(params: OrbitParams, s: AngularState, t_end: f64) -> Vec<f64> {
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let d = reduced_rhs(params, &AngularState::new(y[0], y[1], y[2])).unwrap_or([f64::NAN; 3]);
        dy.copy_from_slice(&d);
    };
    let problem = IvpProblem::new(rhs, 0.0, vec![s.r, s.phi, s.theta], t_end).tolerances(1e-12, 1e-12);
    integrate(&problem, &[]).unwrap().trajectory.last_state().to_vec()
}

#[test]
fn cartesian_euler_lagrange_agrees() {
    // profile curvature of an O(m)×O(n) minimal hypersurface:
    // θ' = (n−1) x'/y − (m−1) y'/x
    let params = p(4, 2);
    let (m, n) = (4.0, 2.0);
    let s = AngularState::new(1.0, PI / 3.0, PI / 6.0);
    let (x0, y0) = s.point();
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let (x, yy, vx, vy) = (y[0], y[1], y[2], y[3]);
        let k = (n - 1.0) * vx / yy - (m - 1.0) * vy / x;
        dy[0] = vx;
        dy[1] = vy;
        dy[2] = -vy * k;
        dy[3] = vx * k;
    };
    let t_end = 0.3;
    let problem = IvpProblem::new(rhs, 0.0, vec![x0, y0, s.theta.cos(), s.theta.sin()], t_end).tolerances(1e-12, 1e-12);
    let cart = integrate(&problem, &[]).unwrap().trajectory.last_state().to_vec();
    let ang = run_angular(params, s, t_end);
    let r = cart[0].hypot(cart[1]);
    let phi = cart[1].atan2(cart[0]);
    let theta = cart[3].atan2(cart[2]);
    assert!((r - ang[0]).abs() < 1e-8);
    assert!((phi - ang[1]).abs() < 1e-8);
    assert!((theta - ang[2]).abs() < 1e-8);
}

#[test]
fn scaling_dilates_time() {
    let params = p(3, 3);
    let s = AngularState::new(0.7, 0.5, 1.9);
    let c = 2.5;
    let a = run_angular(params, s, 0.4);
    let b = run_angular(params, AngularState::new(c * s.r, s.phi, s.theta), c * 0.4);
    assert!((b[0] - c * a[0]).abs() < 1e-9);
    assert!((b[1] - a[1]).abs() < 1e-9);
    assert!((b[2] - a[2]).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn theta_increases_between_second_nullclines(
        m in 2u32..=12, n in 2u32..=12, phi in 0.01f64..1.56, frac in 0.001f64..0.999, r in 0.01f64..100.0,
    ) {
        let params = p(m, n);
        let nc = nullclines(params, phi).unwrap();
        let theta = nc.v2_lower + frac * (nc.v2_upper - nc.v2_lower);
        let d = reduced_rhs(params, &AngularState::new(r, phi, theta)).unwrap();
        prop_assert!(d[2] > 0.0);
    }

    #[test]
    fn phi_decreases_while_tangent_points_clockwise(
        m in 2u32..=12, n in 2u32..=12, phi in 0.01f64..1.56, frac in 0.001f64..0.999, r in 0.01f64..100.0,
    ) {
        let theta = phi - PI * frac;
        let d = reduced_rhs(p(m, n), &AngularState::new(r, phi, theta)).unwrap();
        prop_assert!(d[1] < 0.0);
    }
}

#[test]
fn axis_curve_spirals_into_the_cone() {
    let traj = integrate_from_axis(p(2, 2), 1.0, 1e-6, 1e3).unwrap();
    assert!(traj.crossings().len() >= 3);
    let nodes = traj.nodes();
    for w in nodes.windows(2) {
        assert!(w[1].1.r > w[0].1.r);
    }
    for (_, s) in &nodes {
        assert!(s.delta().abs() < FRAC_PI_2);
    }
    assert!(traj.unit_speed_defect() < 10.0 * traj.tolerance());
}

#[test]
fn nodal_axis_curve_stays_on_one_side() {
    let traj = integrate_from_axis(p(9, 3), 1.0, 1e-6, 1e3).unwrap();
    assert_eq!(traj.crossings().len(), 0);
}

#[test]
fn family_members_meet_the_sphere_orthogonally() {
    for (m, n) in [(2, 2), (2, 3), (3, 3), (2, 5), (3, 4), (2, 4)] {
        let members = construct_family(p(m, n), 6, &AxisStart::default()).unwrap();
        for mem in &members {
            assert!(mem.residual < 1e-6, "({m},{n}) k={} {}", mem.k, mem.residual);
            let end = mem.trajectory.state_at(mem.crossing_time).unwrap();
            assert!((end.r - 1.0).abs() < 1e-9);
            assert!(mem.max_interior_radius() < 1.0);
            assert!(mem.trajectory.unit_speed_defect() < 10.0 * mem.trajectory.tolerance());
            let nodes = mem.trajectory.nodes();
            assert!(nodes.windows(2).all(|w| w[1].1.r > w[0].1.r));
            assert!(nodes.iter().all(|(_, s)| s.delta().abs() < FRAC_PI_2));
        }
    }
}

#[test]
fn member_cut_at_second_crossing() {
    let mem = construct_family_member(p(3, 4), 2).unwrap();
    assert_eq!(mem.k, 2);
    assert_eq!(mem.trajectory.crossings().len(), 2);
    let nodes = mem.trajectory.nodes();
    assert!(nodes.windows(2).all(|w| w[1].1.r > w[0].1.r));
}

#[test]
fn family_needs_focal_regime() {
    assert!(matches!(construct_family_member(p(4, 4), 1), Err(Error::WrongRegime { m: 4, n: 4 })));
}

#[test]
fn crossing_budget_is_reported() {
    let start = AxisStart { radius_cap: 5.0, ..AxisStart::default() };
    assert!(matches!(construct_family(p(2, 2), 6, &start), Err(Error::CrossingNotFound { wanted: 6, .. })));
}

#[test]
fn members_approach_the_cone() {
    let d = |params: OrbitParams| -> Vec<f64> {
        construct_family(params, 6, &AxisStart::default())
            .unwrap()
            .iter()
            .map(|m| cone_distance(&m.trajectory, 0.5, 1.0).unwrap())
            .collect()
    };
    let d22 = d(p(2, 2));
    assert!(d22[5] < d22[0]);
    let d23 = d(p(2, 3));
    assert!(d23.windows(2).all(|w| w[1] <= w[0]), "{d23:?}");
}

#[test]
fn cone_window_validation() {
    let mem = construct_family_member(p(2, 2), 1).unwrap();
    assert!(matches!(cone_distance(&mem.trajectory, 0.5, 1.5), Err(Error::InvalidInput(_))));
    assert!(matches!(cone_distance(&mem.trajectory, 1e-9, 2e-9), Err(Error::EmptyWindow)));
}

#[test]
fn annulus_shot_is_monotone_in_angles() {
    let shot = shoot_annulus(p(9, 3), 0.5, FRAC_PI_2).unwrap();
    let nodes = shot.trajectory.nodes();
    assert!(nodes.len() > 3);
    for w in nodes.windows(2) {
        assert!(w[1].1.theta > w[0].1.theta);
        assert!(w[1].1.phi < w[0].1.phi);
    }
    assert!(shot.t_minus < 0.0 && shot.t_plus > 0.0);
}

#[test]
fn symmetric_annulus() {
    let sol = solve_annulus(p(4, 4), 0.5).unwrap();
    assert!((sol.eps_bar - FRAC_PI_2).abs() < 1e-8, "{}", sol.eps_bar);
}

#[test]
fn asymmetric_annulus() {
    let sol = solve_annulus(p(9, 3), 0.5).unwrap();
    assert!(sol.eps_bar > 0.0 && sol.eps_bar < PI);
    assert!(sol.gap.abs() < 1e-9);
    assert!(sol.residual_minus < 1e-6 && sol.residual_plus < 1e-6);
    assert!(sol.max_radius() <= 1.0 + 1e-9);
    let a = sol.trajectory.state_at(sol.t_minus).unwrap();
    let b = sol.trajectory.state_at(sol.t_plus).unwrap();
    assert!((a.r - 1.0).abs() < 1e-9 && (b.r - 1.0).abs() < 1e-9);
    assert!(sol.trajectory.unit_speed_defect() < 10.0 * sol.trajectory.tolerance());
}

#[test]
fn annulus_needs_nodal_regime() {
    assert!(matches!(solve_annulus(p(2, 2), 0.5), Err(Error::WrongRegime { .. })));
}
