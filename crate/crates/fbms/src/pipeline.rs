//! One function per subcommand. Each builds its report and data files in
//! memory; [`write_run`] puts them on disk together with the manifest.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fbms_core::balancing::{
    balancing_residual, flux, sphere_area, torque, BoundaryCircle, KillingFieldSpec, Orientation, Subspace3,
};
use fbms_core::catenoid::{
    critical_catenoid, free_boundary_catenoid, half_width, half_width_raw, reparam_profile, uniqueness_sweep,
    CatenoidProfile, ProfileSample,
};
use fbms_core::equivariant::{
    cone_distance, construct_family, nullclines, singular_points, solve_annulus_with, AnnulusOptions, AxisStart,
    Classification, OrbitParams,
};
use fbms_core::Error as CoreError;
use serde_json::{json, Value};

use crate::config::{CliConfig, Command};
use crate::export::{self, catenoid_csv, orbit_csv, revolve, sha256_hex, FileEntry, RunManifest};
use crate::report::{Check, Relation, ReportDocument, ReportKind};
use crate::{verify, Result};

/// Samples written for catenoid profiles.
const PROFILE_SAMPLES: usize = 513;
/// Rings of revolution meshes.
const MESH_RINGS: usize = 129;
const NULLCLINE_SAMPLES: usize = 199;

pub struct RunOutput {
    pub report: ReportDocument,
    /// File name and contents, relative to the run directory.
    pub files: Vec<(String, Vec<u8>)>,
}

pub fn execute(cfg: &CliConfig) -> Result<RunOutput> {
    match cfg.command {
        Command::Classify => classify(cfg),
        Command::Family => family(cfg),
        Command::Annulus => annulus(cfg),
        Command::Catenoid => catenoid(cfg),
        Command::CriticalCatenoid => critical(cfg),
        Command::Uniqueness => uniqueness(cfg),
        Command::Balance => balance(cfg),
        Command::VerifyAll => verify_all(cfg),
    }
}

/// Write data files, `report.json` and `manifest.json` into `dir`.
pub fn write_run(cfg: &CliConfig, output: &RunOutput, dir: &Path, started: Instant) -> Result<PathBuf> {
    let mut entries = Vec::new();
    let report = export::to_canonical_json(&output.report)?.into_bytes();
    for (name, bytes) in output.files.iter().map(|(n, b)| (n.as_str(), b)).chain([("report.json", &report)]) {
        export::write_bytes(&dir.join(name), bytes)?;
        entries.push(FileEntry { path: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
    }
    let manifest = RunManifest::new(serde_json::to_value(cfg)?, entries, started.elapsed().as_secs_f64())?;
    manifest.verify(dir)?;
    export::write_canonical_json(&manifest, &dir.join("manifest.json"))?;
    Ok(dir.to_path_buf())
}

fn orbit(cfg: &CliConfig) -> Result<OrbitParams> {
    Ok(OrbitParams::new(cfg.m, cfg.n)?)
}

fn pair(p: (f64, f64)) -> Value {
    json!([p.0, p.1])
}

fn csv_file(name: &str, text: String) -> (String, Vec<u8>) {
    (name.to_string(), text.into_bytes())
}

fn classify(cfg: &CliConfig) -> Result<RunOutput> {
    let params = orbit(cfg)?;
    let s = singular_points(params);
    let mut doc = ReportDocument::new(ReportKind::Classification);
    doc.param("m", cfg.m).param("n", cfg.n);
    doc.result("classification", s.classification.as_str())
        .result("dimension", params.dimension())
        .result("p1", pair(s.p1))
        .result("p2", pair(s.p2))
        .result("jacobian", json!(s.jacobian))
        .result(
            "eigenvalues",
            json!(s.eigenvalues.iter().map(|&(re, im)| json!({"re": re, "im": im})).collect::<Vec<_>>()),
        )
        .result("field_residual", s.field_residual());
    doc.check(Check::below("field vanishes at singular points", s.field_residual(), 1e-12));
    doc.check(Check::holds(
        "focal exactly below dimension 8",
        (s.classification == Classification::Focal) == (params.dimension() < 8),
    ));
    let mut rows = String::from("phi,v1_upper,v1_lower,v2_upper,v2_lower\n");
    for j in 1..=NULLCLINE_SAMPLES {
        let phi = FRAC_PI_2 * j as f64 / (NULLCLINE_SAMPLES + 1) as f64;
        let c = nullclines(params, phi)?;
        let row = [phi, c.v1_upper, c.v1_lower, c.v2_upper, c.v2_lower].map(export::format_float);
        rows.push_str(&row.join(","));
        rows.push('\n');
    }
    Ok(RunOutput { report: doc, files: vec![csv_file("nullclines.csv", rows)] })
}

fn family(cfg: &CliConfig) -> Result<RunOutput> {
    let params = orbit(cfg)?;
    let start =
        AxisStart { radius_cap: cfg.radius_cap, abs_tol: cfg.tol_abs, rel_tol: cfg.tol_rel, ..AxisStart::default() };
    let members = construct_family(params, cfg.k, &start)?;
    let mut doc = ReportDocument::new(ReportKind::Family);
    doc.param("m", cfg.m).param("n", cfg.n).param("k", cfg.k as u64);
    let mut files = Vec::new();
    let mut rows = Vec::new();
    for member in &members {
        let nodes = member.trajectory.nodes();
        let end = member.trajectory.state_at(member.crossing_time).map_or(f64::NAN, |s| s.r);
        let monotone = nodes.windows(2).all(|w| w[1].1.r > w[0].1.r);
        let cone = match cone_distance(&member.trajectory, 0.5, 1.0) {
            Ok(d) => Value::from(d),
            Err(CoreError::EmptyWindow) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        rows.push(json!({
            "k": member.k,
            "crossing_time": member.crossing_time,
            "crossing_radius": member.crossing_radius,
            "boundary_point": pair(member.boundary_point),
            "boundary_tangent": pair(member.boundary_tangent),
            "residual": member.residual,
            "max_interior_radius": member.max_interior_radius(),
            "cone_distance": cone,
            "unit_speed_defect": member.trajectory.unit_speed_defect(),
        }));
        let k = member.k;
        doc.check(Check::below(format!("k={k}: boundary orthogonality"), member.residual, cfg.tol_residual));
        doc.check(Check::below(format!("k={k}: boundary on the unit circle"), (end - 1.0).abs(), 1e-9));
        doc.check(Check::holds(format!("k={k}: radius increasing"), monotone));
        files.push(csv_file(&format!("member-{k}.csv"), orbit_csv(&nodes)?));
    }
    doc.result("members", rows);
    Ok(RunOutput { report: doc, files })
}

fn annulus(cfg: &CliConfig) -> Result<RunOutput> {
    let params = orbit(cfg)?;
    let opts = AnnulusOptions {
        scan_samples: cfg.eps_grid,
        abs_tol: cfg.tol_abs,
        rel_tol: cfg.tol_rel,
        root_tol: cfg.tol_root,
    };
    let a = solve_annulus_with(params, cfg.radius, &opts)?;
    let mut doc = ReportDocument::new(ReportKind::Annulus);
    doc.param("m", cfg.m).param("n", cfg.n).param("radius", cfg.radius).param("eps_grid", cfg.eps_grid as u64);
    doc.result("eps_bar", a.eps_bar)
        .result("gap", a.gap)
        .result("t_minus", a.t_minus)
        .result("t_plus", a.t_plus)
        .result("r_minus", a.r_minus)
        .result("r_plus", a.r_plus)
        .result("residual_minus", a.residual_minus)
        .result("residual_plus", a.residual_plus)
        .result("max_radius", a.max_radius());
    doc.check(Check::below("end radii agree", a.gap.abs(), 1e-9));
    doc.check(Check::below("orthogonality at t-", a.residual_minus, cfg.tol_residual));
    doc.check(Check::below("orthogonality at t+", a.residual_plus, cfg.tol_residual));
    doc.check(Check::below("curve stays in the unit disc", a.max_radius() - 1.0, 1e-9));
    if cfg.m == cfg.n {
        doc.check(Check::below("symmetric case has eps = pi/2", (a.eps_bar - FRAC_PI_2).abs(), 1e-8));
    }
    let files = vec![csv_file("profile.csv", orbit_csv(&a.trajectory.nodes())?)];
    Ok(RunOutput { report: doc, files })
}

/// The mesh is checked for manifoldness, outward winding and containment
/// in the closed unit ball.
fn mesh_checks(doc: &mut ReportDocument, samples: &[ProfileSample], segments: usize) -> Result<Vec<u8>> {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.z, s.r)).collect();
    let mesh = revolve(&pts, segments)?;
    let edges = mesh.edge_report();
    doc.result("mesh_vertices", mesh.vertices.len() as u64)
        .result("mesh_faces", mesh.faces.len() as u64)
        .result("mesh_euler_characteristic", edges.euler_characteristic);
    doc.check(Check::holds("mesh is an oriented manifold", edges.is_oriented_manifold()));
    doc.check(Check::holds("mesh normals point outward", mesh.inward_faces() == 0));
    doc.check(Check::below("mesh inside the unit ball", mesh.max_norm() - 1.0, 1e-6));
    Ok(mesh.to_obj().into_bytes())
}

fn catenoid(cfg: &CliConfig) -> Result<RunOutput> {
    let n = cfg.n;
    let profile = CatenoidProfile::standard(n)?;
    let fb = free_boundary_catenoid(n)?;
    let mut doc = ReportDocument::new(ReportKind::Catenoid);
    doc.param("n", n);
    doc.result("window", profile.half_width())
        .result("relative_first_integral_defect", profile.relative_first_integral_defect())
        .result("symmetry_defect", profile.symmetry_defect())
        .result("scale", fb.scale)
        .result("waist_radius", fb.waist_radius())
        .result("boundary_height", fb.boundary_height)
        .result("boundary_radius", fb.boundary_radius)
        .result("residual_top", fb.residual_top)
        .result("residual_bottom", fb.residual_bottom);
    doc.check(Check::below("first integral", profile.relative_first_integral_defect(), 1e-8));
    doc.check(Check::below("mirror symmetry", profile.symmetry_defect(), 1e-10 * profile.samples()[0].r));
    doc.check(Check::below("boundary on the unit sphere", (fb.boundary_distance() - 1.0).abs(), 1e-12));
    doc.check(Check::below("boundary orthogonality", fb.residual_top.max(fb.residual_bottom), 1e-10));
    if n > 2 {
        let (t, raw) = (half_width(n)?, half_width_raw(n)?);
        doc.result("half_width", t).result("half_width_raw", raw);
        doc.check(Check::below("half width by two quadratures", (t - raw).abs(), 1e-8));
    }
    let fb_samples = fb.samples(PROFILE_SAMPLES);
    let mut files = vec![
        csv_file("profile.csv", catenoid_csv(profile.samples())?),
        csv_file("free-boundary.csv", catenoid_csv(&fb_samples)?),
    ];
    if n == 2 {
        let rings = fb.samples(MESH_RINGS);
        files.push(("free-boundary.obj".into(), mesh_checks(&mut doc, &rings, cfg.segments)?));
    }
    Ok(RunOutput { report: doc, files })
}

fn critical(cfg: &CliConfig) -> Result<RunOutput> {
    let c = critical_catenoid();
    let mut doc = ReportDocument::new(ReportKind::Catenoid);
    doc.param("n", 2).param("segments", cfg.segments as u64);
    let coth_defect = (c.sigma - 1.0 / c.sigma.tanh()).abs();
    doc.result("sigma", c.sigma)
        .result("tau", c.tau)
        .result("waist_radius", 1.0 / c.tau)
        .result("boundary_height", c.boundary_height())
        .result("boundary_radius", c.radius_at(c.boundary_height()))
        .result("tangency_residual", c.tangency_residual());
    doc.check(Check::below("sigma = coth sigma", coth_defect, 1e-12));
    doc.check(Check::below("tau = sigma cosh sigma", (c.tau - c.sigma * c.sigma.cosh()).abs(), 1e-14));
    doc.check(Check::below("boundary orthogonality", c.tangency_residual(), 1e-10));
    let samples = c.samples(PROFILE_SAMPLES);
    let obj = mesh_checks(&mut doc, &c.samples(MESH_RINGS), cfg.segments)?;
    Ok(RunOutput {
        report: doc,
        files: vec![csv_file("profile.csv", catenoid_csv(&samples)?), ("mesh.obj".into(), obj)],
    })
}

/// Default upper end of the shift grid.
pub fn default_c_max(n: u32) -> Result<f64> {
    Ok(if n == 2 { 2.0 } else { (0.9 * half_width(n)?).min(2.0) })
}

fn uniqueness(cfg: &CliConfig) -> Result<RunOutput> {
    let n = cfg.n;
    let c_max = match cfg.c_max {
        Some(c) => c,
        None => default_c_max(n)?,
    };
    let grid: Vec<f64> = (1..=cfg.c_grid).map(|j| c_max * j as f64 / cfg.c_grid as f64).collect();
    let sweep = uniqueness_sweep(n, &grid)?;
    let rp = reparam_profile(n, 4.0)?;
    let k = (n - 1) as f64;
    let cosh_defect = ((k * rp.v).cosh() - (n as f64).sqrt()).abs();
    let mut doc = ReportDocument::new(ReportKind::Catenoid);
    doc.param("n", n).param("c_max", c_max).param("c_grid", cfg.c_grid as u64);
    let gaps: Vec<Value> = sweep.certificates.iter().map(|c| json!([c.c, c.gap()])).collect();
    let third: Vec<Value> = sweep.third_derivative_gaps.iter().map(|&(c, g)| json!([c, g])).collect();
    let min_third = sweep.third_derivative_gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    doc.result("gaps", gaps)
        .result("third_derivative_gaps", third)
        .result("second_derivative_gap", sweep.second_derivative_gap)
        .result("second_derivative_gap_fd", sweep.second_derivative_gap_fd)
        .result("r_z0", sweep.r_z0)
        .result("r_z0_bound", sweep.r_z0_bound)
        .result("reciprocal_term_max", sweep.reciprocal_term_max)
        .result("reciprocal_term_flagged", sweep.reciprocal_term_flagged)
        .result("waist_parameter", rp.v)
        .result("cosh_identity_defect", cosh_defect);
    doc.check(Check::holds("gap positive on the grid", sweep.gaps_positive));
    doc.check(Check::below("second derivatives agree at c = 0", sweep.second_derivative_gap, 1e-8));
    doc.check(Check::below("second derivatives agree at c = 0 (differences)", sweep.second_derivative_gap_fd, 1e-8));
    doc.check(Check::new("third derivative gap", min_third, Relation::AtLeast, -1e-6));
    doc.check(Check::new("r(z0) lower bound", sweep.r_z0 - sweep.r_z0_bound, Relation::AtLeast, 0.0));
    doc.check(Check::below("cosh((n-1)v) = sqrt(n)", cosh_defect, 1e-12));
    if n >= 3 {
        let lhs = rp.claim_lhs()?;
        doc.result("claim_lhs", lhs).result("claim_bound", rp.claim_bound());
        doc.check(Check::below("sinh((n-1)v) psi(v) below the bound", lhs - rp.claim_bound(), 0.0));
    }
    let mut rows = String::from("c,z1,z2,f1,f2,df1,df2\n");
    for c in &sweep.certificates {
        rows.push_str(&[c.c, c.z1, c.z2, c.f1, c.f2, c.df1, c.df2].map(export::format_float).join(","));
        rows.push('\n');
    }
    Ok(RunOutput { report: doc, files: vec![csv_file("certificates.csv", rows)] })
}

/// Latitude spheres `z_j` spread over 80% of the profile window.
pub fn latitudes(profile: &CatenoidProfile, count: usize, orientation: Orientation) -> Result<Vec<BoundaryCircle>> {
    let w = 0.8 * profile.half_width().min(1.5);
    (0..count)
        .map(|j| {
            let z = w * (2.0 * j as f64 / (count - 1) as f64 - 1.0);
            let (r, rdot) = profile.eval(z).ok_or(CoreError::DomainExceeded { requested: z, limit: w })?;
            Ok(BoundaryCircle::on_profile(profile.n(), z, r, rdot, orientation)?)
        })
        .collect()
}

fn balance(cfg: &CliConfig) -> Result<RunOutput> {
    let n = cfg.n;
    let nodes = cfg.quad_nodes;
    let profile = CatenoidProfile::standard(n)?;
    let omega = sphere_area(n - 1);
    let fluxes = latitudes(&profile, 10, Orientation::Upward)?
        .iter()
        .map(|c| Ok(flux(c, nodes)?[n as usize]))
        .collect::<Result<Vec<f64>>>()?;
    let spread = fluxes.iter().map(|f| (f - omega).abs()).fold(0.0, f64::max);
    let fb = free_boundary_catenoid(n)?;
    let circles = fb.boundary_circles()?;
    let sub = Subspace3::new(n, 0, 1)?;
    let torques = circles.iter().map(|c| Ok(torque(c, nodes, Some(sub))?)).collect::<Result<Vec<_>>>()?;
    let torque_max = torques.iter().flatten().fold(0.0f64, |a, t| a.max(t.abs()));
    let mut rotation = 0.0f64;
    for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let k = KillingFieldSpec::rotation(axis, [0.0; 3])?;
        rotation = rotation.max(balancing_residual(&circles, &k, nodes, Some(sub))?);
    }
    let up = KillingFieldSpec::translation([0.0, 0.0, 1.0]);
    let segment = latitudes(&profile, 2, Orientation::Outward)?;
    let translation = balancing_residual(&segment, &up, nodes, Some(sub))?;
    let waist = flux(&fb.waist_circle()?, nodes)?[n as usize];
    let mut doc = ReportDocument::new(ReportKind::Balancing);
    doc.param("n", n).param("quad_nodes", nodes as u64);
    doc.result("sphere_area", omega)
        .result("latitude_fluxes", fluxes)
        .result("waist_flux_free_boundary", waist)
        .result("boundary_torques", json!(torques))
        .result("rotation_residual", rotation)
        .result("translation_residual", translation);
    doc.check(Check::below("axial flux equals the sphere area on every latitude", spread, 1e-8));
    doc.check(Check::below("boundary torques vanish", torque_max, 1e-8));
    doc.check(Check::below("rotations balance on the free boundary catenoid", rotation, 1e-8));
    doc.check(Check::below("vertical translation balances on a segment", translation, 1e-8));
    Ok(RunOutput { report: doc, files: Vec::new() })
}

fn verify_all(cfg: &CliConfig) -> Result<RunOutput> {
    let scratch = cfg.run_dir().join("serialization-scratch");
    let outcome = verify::run_all(&scratch);
    let _ = std::fs::remove_dir_all(&scratch);
    let mut doc = ReportDocument::new(ReportKind::Verification);
    let mut rows = Vec::new();
    for c in &outcome {
        eprintln!("{}", c.line());
        rows.push(json!({"id": c.id, "name": c.name, "passed": c.passed(), "error": c.error}));
        doc.checks.extend(c.checks.iter().map(|k| Check { name: format!("{}: {}", c.id, k.name), ..k.clone() }));
        if let Some(e) = &c.error {
            doc.check(Check::holds(format!("{}: {e}", c.id), false));
        }
    }
    doc.result("criteria", rows);
    Ok(RunOutput { report: doc, files: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbms_core::catenoid::default_window;

    #[test]
    fn window_helper_is_inside_the_profile() {
        for n in 2..=6 {
            let p = CatenoidProfile::standard(n).unwrap();
            assert_eq!(latitudes(&p, 10, Orientation::Upward).unwrap().len(), 10);
            assert!(default_c_max(n).unwrap() < default_window(n).unwrap());
        }
    }
}
