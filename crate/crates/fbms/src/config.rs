use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Family,
    Annulus,
    Catenoid,
    CriticalCatenoid,
    Uniqueness,
    Balance,
    VerifyAll,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Family => "family",
            Command::Annulus => "annulus",
            Command::Catenoid => "catenoid",
            Command::CriticalCatenoid => "critical-catenoid",
            Command::Uniqueness => "uniqueness",
            Command::Balance => "balance",
            Command::VerifyAll => "verify-all",
        }
    }
}

/// Optional settings, as read from a config file or from flags. Keys match
/// the long flag names with `-` replaced by `_`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub k: Option<usize>,
    pub radius: Option<f64>,
    pub eps_grid: Option<usize>,
    pub c_grid: Option<usize>,
    pub c_max: Option<f64>,
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
    pub tol_root: Option<f64>,
    pub tol_residual: Option<f64>,
    pub radius_cap: Option<f64>,
    pub quad_nodes: Option<usize>,
    pub segments: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliConfig {
    pub command: Command,
    pub m: u32,
    pub n: u32,
    pub k: usize,
    /// Starting radius on the cone line for the annulus shooting.
    pub radius: f64,
    /// `ε` samples scanned for the annulus bracket.
    pub eps_grid: usize,
    /// Shift samples in `(0, c_max]` for the uniqueness sweep.
    pub c_grid: usize,
    /// Largest shift; when absent, 2 for `n = 2` and `0.9 T(n)` otherwise.
    pub c_max: Option<f64>,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub tol_root: f64,
    /// Threshold for boundary orthogonality residuals.
    pub tol_residual: f64,
    /// Radius at which axis curves are abandoned.
    pub radius_cap: f64,
    pub quad_nodes: usize,
    pub segments: usize,
    pub out: PathBuf,
}

impl CliConfig {
    pub fn defaults(command: Command) -> Self {
        CliConfig {
            command,
            m: 2,
            n: 2,
            k: 1,
            radius: 0.5,
            eps_grid: 64,
            c_grid: 20,
            c_max: None,
            tol_abs: 1e-12,
            tol_rel: 1e-12,
            tol_root: 1e-14,
            tol_residual: 1e-6,
            radius_cap: 1e12,
            quad_nodes: 256,
            segments: 128,
            out: PathBuf::from("out"),
        }
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(command: Command, file: Option<&Overrides>, flags: &Overrides) -> Result<Self> {
        let mut cfg = CliConfig::defaults(command);
        for o in file.into_iter().chain(Some(flags)) {
            cfg.apply(o);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { self.$f = v; } )* };
        }
        set!(
            m,
            n,
            k,
            radius,
            eps_grid,
            c_grid,
            tol_abs,
            tol_rel,
            tol_root,
            tol_residual,
            radius_cap,
            quad_nodes,
            segments,
            out
        );
        if o.c_max.is_some() {
            self.c_max = o.c_max;
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(flag: &str, x: f64) -> Result<()> {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::config(flag, format!("{x} is not a positive finite number")))
            }
        }
        fn tolerance(flag: &str, x: f64) -> Result<()> {
            positive(flag, x)?;
            if x < 1.0 {
                Ok(())
            } else {
                Err(Error::config(flag, format!("{x} is not below 1")))
            }
        }
        for (flag, v) in [("--m", self.m), ("--n", self.n)] {
            if !(2..=64).contains(&v) {
                return Err(Error::config(flag, format!("{v} is outside 2..=64")));
            }
        }
        if !(1..=1000).contains(&self.k) {
            return Err(Error::config("--k", format!("{} is outside 1..=1000", self.k)));
        }
        positive("--radius", self.radius)?;
        if self.eps_grid < 2 {
            return Err(Error::config("--eps-grid", "at least 2 samples are needed"));
        }
        if self.c_grid < 1 {
            return Err(Error::config("--c-grid", "at least 1 sample is needed"));
        }
        if let Some(c) = self.c_max {
            positive("--c-max", c)?;
        }
        tolerance("--tol-abs", self.tol_abs)?;
        tolerance("--tol-rel", self.tol_rel)?;
        tolerance("--tol-root", self.tol_root)?;
        tolerance("--tol-residual", self.tol_residual)?;
        positive("--radius-cap", self.radius_cap)?;
        if self.radius_cap <= 1.0 {
            return Err(Error::config("--radius-cap", "must exceed the axis intercept 1"));
        }
        if self.quad_nodes < 8 {
            return Err(Error::config("--quad-nodes", format!("{} is below the minimum 8", self.quad_nodes)));
        }
        if self.segments < 8 {
            return Err(Error::config("--segments", format!("{} is below the minimum 8", self.segments)));
        }
        Ok(())
    }

    /// `<subcommand>-<params>`, the run directory name below `out`.
    pub fn run_name(&self) -> String {
        let cmd = self.command.name();
        match self.command {
            Command::Classify => format!("{cmd}-m{}-n{}", self.m, self.n),
            Command::Family => format!("{cmd}-m{}-n{}-k{}", self.m, self.n, self.k),
            Command::Annulus => format!("{cmd}-m{}-n{}-R{}", self.m, self.n, self.radius),
            Command::Catenoid | Command::Uniqueness | Command::Balance => {
                format!("{cmd}-n{}", self.n)
            }
            Command::CriticalCatenoid | Command::VerifyAll => cmd.to_string(),
        }
    }

    pub fn run_dir(&self) -> PathBuf {
        self.out.join(self.run_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = Overrides { m: Some(3), n: Some(3), radius: Some(0.25), ..Default::default() };
        let flags = Overrides { n: Some(5), ..Default::default() };
        let cfg = CliConfig::resolve(Command::Annulus, Some(&file), &flags).unwrap();
        assert_eq!((cfg.m, cfg.n, cfg.radius, cfg.k), (3, 5, 0.25, 1));
        assert_eq!(cfg.run_name(), "annulus-m3-n5-R0.25");
    }

    #[test]
    fn bad_values_name_the_flag() {
        let flags = Overrides { segments: Some(4), ..Default::default() };
        let err = CliConfig::resolve(Command::CriticalCatenoid, None, &flags).unwrap_err();
        assert!(err.to_string().contains("--segments"), "{err}");
        assert_eq!(err.exit_code(), 2);
        let flags = Overrides { tol_rel: Some(-1.0), ..Default::default() };
        assert!(CliConfig::resolve(Command::Family, None, &flags).unwrap_err().to_string().contains("--tol-rel"));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<Overrides>(r#"{"m": 2, "bogus": 1}"#).is_err());
        let o: Overrides = serde_json::from_str(r#"{"eps_grid": 32, "out": "x"}"#).unwrap();
        assert_eq!(o.eps_grid, Some(32));
    }
}
