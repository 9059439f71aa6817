use std::f64::consts::PI;

use fbms_core::balancing::{
    balancing_residual, flux, sphere_area, torque, torque_about, BoundaryCircle, KillingFieldSpec, Orientation,
    Subspace3,
};
use fbms_core::catenoid::{critical_catenoid, free_boundary_catenoid, half_width, CatenoidProfile};
use proptest::prelude::*;

const NODES: usize = 256;

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn crit_waist() -> BoundaryCircle {
    let c = critical_catenoid();
    BoundaryCircle::on_profile(2, 0.0, 1.0 / c.tau, 0.0, Orientation::Upward).unwrap()
}

// `frac` in [-1, 1], scaled to half the blow-up window when n > 2
fn latitude(n: u32, frac: f64, orientation: Orientation) -> BoundaryCircle {
    let p = CatenoidProfile::standard(n).unwrap();
    let z = if n == 2 { frac } else { 0.5 * half_width(n).unwrap() * frac };
    let (r, rdot) = p.eval(z).unwrap();
    BoundaryCircle::on_profile(n, z, r, rdot, orientation).unwrap()
}

#[test]
fn waist_flux_of_critical_catenoid() {
    let c = critical_catenoid();
    let f = flux(&crit_waist(), NODES).unwrap();
    assert_eq!(f[0], 0.0);
    assert_eq!(f[1], 0.0);
    assert!((f[2] - 2.0 * PI / c.tau).abs() < 1e-12);
}

#[test]
fn flux_is_the_same_on_every_latitude() {
    for n in 2..=6 {
        let omega = sphere_area(n - 1);
        for z in [0.0, 0.3, 0.6] {
            let f = flux(&latitude(n, z, Orientation::Upward), NODES).unwrap();
            assert!((f[n as usize] - omega).abs() < 1e-8, "n = {n}, z = {z}");
            assert!(f[..n as usize].iter().all(|&x| x == 0.0));
        }
    }
}

#[test]
fn waist_torque_vanishes() {
    let t = torque(&crit_waist(), NODES, None).unwrap();
    assert!(t.iter().all(|x| x.abs() < 1e-14));
    let t = torque_about([0.0, 0.0, 0.7], &crit_waist(), NODES, None).unwrap();
    assert!(t.iter().all(|x| x.abs() < 1e-14));
}

#[test]
fn free_boundary_torque_vanishes() {
    for n in 2..=5 {
        let fb = free_boundary_catenoid(n).unwrap();
        let sub = if n == 2 { None } else { Some(Subspace3::new(n, 0, 1).unwrap()) };
        for circle in fb.boundary_circles().unwrap() {
            let t = torque(&circle, NODES, sub).unwrap();
            let mag = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(mag < 1e-8, "n = {n}: {mag}");
        }
    }
}

#[test]
fn base_point_identity() {
    let w = [0.3, -0.2, 0.0];
    let circle = crit_waist();
    let lhs = torque_about(w, &circle, NODES, None).unwrap();
    let t = torque(&circle, NODES, None).unwrap();
    let f = flux(&circle, NODES).unwrap();
    let wf = cross(w, [f[0], f[1], f[2]]);
    for i in 0..3 {
        assert!((lhs[i] - (t[i] - wf[i])).abs() < 1e-10);
    }
    assert_eq!(torque_about([0.0; 3], &circle, NODES, None).unwrap(), t);
}

#[test]
fn translated_circle_torque() {
    let w = [0.4, 0.1, -0.3];
    let circle = latitude(2, 0.5, Orientation::Upward);
    let moved = circle.translated(w);
    let t = torque(&moved, NODES, None).unwrap();
    let f = flux(&moved, NODES).unwrap();
    let expected = cross(w, [f[0], f[1], f[2]]);
    let t0 = torque(&circle, NODES, None).unwrap();
    for i in 0..3 {
        assert!((t[i] - t0[i] - expected[i]).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn base_point_identity_random(
        wx in -1.0f64..1.0, wy in -1.0f64..1.0, wz in -1.0f64..1.0,
        ox in -1.0f64..1.0, oy in -1.0f64..1.0, oz in -1.0f64..1.0,
        z in -1.0f64..1.0, n in 2u32..=5,
    ) {
        let circle = latitude(n, z, Orientation::Upward).translated([ox, oy, oz]);
        let sub = Some(Subspace3::new(n, 0, 1).unwrap());
        let w = [wx, wy, wz];
        let lhs = torque_about(w, &circle, NODES, sub).unwrap();
        let t = torque(&circle, NODES, sub).unwrap();
        let f = flux(&circle, NODES).unwrap();
        let wf = cross(w, [f[0], f[1], f[n as usize]]);
        for i in 0..3 {
            prop_assert!((lhs[i] - (t[i] - wf[i])).abs() < 1e-9);
        }
    }
}

#[test]
fn rotations_balance_on_the_free_boundary_catenoid() {
    for n in 2..=4 {
        let fb = free_boundary_catenoid(n).unwrap();
        let circles = fb.boundary_circles().unwrap();
        for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.3, -0.5, 0.8]] {
            let k = KillingFieldSpec::rotation(axis, [0.0; 3]).unwrap();
            let res = balancing_residual(&circles, &k, NODES, None).unwrap();
            assert!(res < 1e-8, "n = {n}: {res}");
        }
    }
}

#[test]
fn translations_balance_on_a_segment() {
    for n in 2..=5 {
        let circles = [latitude(n, 0.5, Orientation::Outward), latitude(n, -0.2, Orientation::Outward)];
        let k = KillingFieldSpec::translation([0.0, 0.0, 1.0]);
        assert!(balancing_residual(&circles, &k, NODES, None).unwrap() < 1e-8);
        let single = balancing_residual(&circles[..1], &k, NODES, None).unwrap();
        assert!((single - sphere_area(n - 1)).abs() < 1e-8);
    }
}

#[test]
fn quadrature_converges() {
    let circle = latitude(2, 0.7, Orientation::Upward).translated([0.2, -0.1, 0.05]);
    let k = KillingFieldSpec::rotation([0.2, 0.9, -0.4], [0.1, 0.3, 0.0]).unwrap();
    let mut nodes = 64;
    while nodes <= 1024 {
        let a = torque(&circle, nodes, None).unwrap();
        let b = torque(&circle, 2 * nodes, None).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-10);
        }
        let fa = balancing_residual(&[circle], &k, nodes, None).unwrap();
        let fb = balancing_residual(&[circle], &k, 2 * nodes, None).unwrap();
        assert!((fa - fb).abs() < 1e-10);
        nodes *= 2;
    }
}

#[test]
fn residual_is_additive_over_circles() {
    let a = latitude(2, 0.4, Orientation::Outward);
    let b = latitude(2, -0.9, Orientation::Outward).translated([0.1, 0.2, 0.0]);
    let k = KillingFieldSpec::translation([0.3, 0.0, 1.0]);
    let sum = balancing_residual(&[a, b], &k, NODES, None).unwrap();
    let fa = flux(&a, NODES).unwrap();
    let fb = flux(&b, NODES).unwrap();
    let expected = 0.3 * (fa[0] + fb[0]) + fa[2] + fb[2];
    assert!((sum - expected.abs()).abs() < 1e-12);

    // a rotation about W through e_x pairs with the x component of T_W
    let w = [0.0, 0.2, 0.0];
    let k = KillingFieldSpec::rotation([1.0, 0.0, 0.0], w).unwrap();
    let tw = torque_about(w, &a, NODES, None).unwrap()[0] + torque_about(w, &b, NODES, None).unwrap()[0];
    assert!((balancing_residual(&[a, b], &k, NODES, None).unwrap() - tw.abs()).abs() < 1e-12);
}
