use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{CliConfig, Command, Overrides};
use crate::pipeline;

#[derive(Parser, Debug)]
#[command(name = "fbms", version, about = "Equivariant free boundary minimal surfaces in the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Sub {
    /// Classify the singular points of the orbit-space field for (m, n)
    Classify,
    /// Build the members k = 1..K of the oscillating family (m + n < 8)
    Family,
    /// Solve for the free boundary annulus (m + n >= 8)
    Annulus,
    /// Normalized n-catenoid profile and the free boundary n-catenoid
    Catenoid,
    /// The free boundary catenoid in the unit ball of R^3, with a mesh
    CriticalCatenoid,
    /// Shift sweep certifying uniqueness of the free boundary n-catenoid
    Uniqueness,
    /// Flux, torque and balancing on latitude spheres of n-catenoids
    Balance,
    /// Run the full acceptance suite
    VerifyAll,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Command {
        match s {
            Sub::Classify => Command::Classify,
            Sub::Family => Command::Family,
            Sub::Annulus => Command::Annulus,
            Sub::Catenoid => Command::Catenoid,
            Sub::CriticalCatenoid => Command::CriticalCatenoid,
            Sub::Uniqueness => Command::Uniqueness,
            Sub::Balance => Command::Balance,
            Sub::VerifyAll => Command::VerifyAll,
        }
    }
}

#[derive(Args, Debug)]
struct Flags {
    /// First factor of the symmetry group O(m)×O(n), 2..=64
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Second factor of O(m)×O(n); for catenoids the surface dimension
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Number of family members to build
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Starting radius on the cone line (annulus)
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Number of eps samples scanned for the annulus bracket
    #[arg(long, global = true)]
    eps_grid: Option<usize>,
    /// Number of shifts in the uniqueness sweep
    #[arg(long, global = true)]
    c_grid: Option<usize>,
    /// Largest shift in the uniqueness sweep
    #[arg(long, global = true)]
    c_max: Option<f64>,
    /// Absolute ODE tolerance
    #[arg(long, global = true)]
    tol_abs: Option<f64>,
    /// Relative ODE tolerance
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Tolerance of the eps bisection
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    /// Threshold on boundary orthogonality residuals
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// Radius at which axis curves are abandoned (family)
    #[arg(long, global = true)]
    radius_cap: Option<f64>,
    /// Quadrature nodes on each latitude circle
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Angular segments of revolution meshes
    #[arg(long, global = true)]
    segments: Option<usize>,
    /// Output root; runs go to <out>/<subcommand>-<params>/
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with default settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            m: self.m,
            n: self.n,
            k: self.k,
            radius: self.radius,
            eps_grid: self.eps_grid,
            c_grid: self.c_grid,
            c_max: self.c_max,
            tol_abs: self.tol_abs,
            tol_rel: self.tol_rel,
            tol_root: self.tol_root,
            tol_residual: self.tol_residual,
            radius_cap: self.radius_cap,
            quad_nodes: self.quad_nodes,
            segments: self.segments,
            out: self.out.clone(),
        }
    }
}

/// Parse `argv`, run the subcommand and write its outputs. Returns the
/// process exit code: 0 success, 2 rejected input, 3 numerical failure,
/// 4 an invariant check failed, 1 I/O trouble.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let started = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let command = Command::from(cli.command);
    let resolved = cli
        .flags
        .config
        .as_deref()
        .map(Overrides::from_file)
        .transpose()
        .and_then(|file| CliConfig::resolve(command, file.as_ref(), &cli.flags.overrides()));
    let cfg = match resolved {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let result = pipeline::execute(&cfg).and_then(|output| {
        let dir = pipeline::write_run(&cfg, &output, &cfg.run_dir(), started)?;
        Ok((output, dir))
    });
    match result {
        Ok((output, dir)) => {
            let failures: Vec<_> = output.report.failures().collect();
            for f in &failures {
                eprintln!("check failed: {} (measured {:?}, threshold {})", f.name, f.measured, f.threshold);
            }
            println!("{}", dir.display());
            if failures.is_empty() {
                0
            } else {
                4
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
