//! Command-line flags, the optional TOML config file and their merge.
//!
//! Precedence: flag, then config file, then built-in default. The cache
//! directory additionally falls back to `XYQ_CACHE_DIR` before the default.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use xyquench::scan::{DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING};
use xyquench::{DeficitVariant, OptimizerSpec, QuadratureSpec};

use crate::error::{CliError, CliResult};

pub const CACHE_ENV: &str = "XYQ_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".xyq-cache";

#[derive(Debug, Parser)]
#[command(name = "xyq", version, about = "Quench sweeps of the anisotropic XY chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measures along the initial field at one time.
    Curve(CommonArgs),
    /// Logarithmic negativity and work-deficit over a time × field grid.
    Heatmap(CommonArgs),
    /// Work-deficit areas, scale factors and revival agreement over time.
    Area(AreaArgs),
    /// Revival prediction from the area rule.
    Predict(PredictArgs),
    /// Oracle and invariant checks; exits 4 on any failure.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Time for single-time commands.
    #[arg(long = "t")]
    pub t: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_step: Option<f64>,
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_step: Option<f64>,
    /// local-sum or global-dephased.
    #[arg(long)]
    pub variant: Option<DeficitVariant>,
    #[arg(long)]
    pub eps_ent: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    #[arg(long)]
    pub grid_theta: Option<usize>,
    #[arg(long)]
    pub grid_phi: Option<usize>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
    /// CSV path; the manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the options above (snake_case keys).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AreaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Scaling parameter M; defaults to the calibrated minimum area.
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub m: Option<f64>,
    /// Minimum revival area; calibrated on the time grid when absent.
    #[arg(long)]
    pub area_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Trivial,
    Ring,
    StatePsd,
    Ed,
    Optimizer,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "trivial")]
    pub suite: Suite,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gamma: Option<f64>,
    pub t: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_step: Option<f64>,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub a_step: Option<f64>,
    pub variant: Option<DeficitVariant>,
    pub eps_ent: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub grid_theta: Option<usize>,
    pub grid_phi: Option<usize>,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: Option<bool>,
    pub out: Option<PathBuf>,
    pub m: Option<f64>,
    pub area_min: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })
    }
}

/// Everything that determines the numbers in an output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Physics {
    pub gamma: f64,
    pub t: Option<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub a_step: f64,
    pub variant: DeficitVariant,
    pub eps_ent: f64,
    pub quad: QuadratureSpec,
    pub opt: OptimizerSpec,
    pub m: Option<f64>,
    pub area_min: Option<f64>,
}

/// How the run is executed; never changes results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Execution {
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub physics: Physics,
    pub execution: Execution,
}

fn param(msg: impl Into<String>) -> CliError {
    CliError::Param(msg.into())
}

impl Settings {
    pub fn resolve(args: &CommonArgs, m: Option<f64>, area_min: Option<f64>) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let env_dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        Self::merge(args, m, area_min, &file, env_dir)
    }

    pub fn merge(
        args: &CommonArgs,
        m: Option<f64>,
        area_min: Option<f64>,
        file: &FileConfig,
        env_cache_dir: Option<PathBuf>,
    ) -> CliResult<Self> {
        let qd = QuadratureSpec::default();
        let od = OptimizerSpec::default();
        let quad = QuadratureSpec {
            abs_tol: args.abs_tol.or(file.abs_tol).unwrap_or(qd.abs_tol),
            rel_tol: args.rel_tol.or(file.rel_tol).unwrap_or(qd.rel_tol),
            max_subdivisions: args
                .max_subdivisions
                .or(file.max_subdivisions)
                .unwrap_or(qd.max_subdivisions),
        };
        quad.validate()?;
        let opt = OptimizerSpec {
            grid_theta: args.grid_theta.or(file.grid_theta).unwrap_or(od.grid_theta),
            grid_phi: args.grid_phi.or(file.grid_phi).unwrap_or(od.grid_phi),
            ..od
        };
        opt.validate()?;

        let physics = Physics {
            gamma: args.gamma.or(file.gamma).unwrap_or(0.5),
            t: args.t.or(file.t),
            t_min: args.t_min.or(file.t_min).unwrap_or(0.0),
            t_max: args.t_max.or(file.t_max).unwrap_or(10.0),
            t_step: args.t_step.or(file.t_step).unwrap_or(0.25),
            a_min: args.a_min.or(file.a_min).unwrap_or(0.0),
            a_max: args.a_max.or(file.a_max).unwrap_or(2.0),
            a_step: args.a_step.or(file.a_step).unwrap_or(0.01),
            variant: args.variant.or(file.variant).unwrap_or_default(),
            eps_ent: args.eps_ent.or(file.eps_ent).unwrap_or(DEFAULT_EPS_ENT),
            quad,
            opt,
            m: m.or(file.m),
            area_min: area_min.or(file.area_min),
        };
        physics.check()?;

        let no_cache = args.no_cache || file.no_cache.unwrap_or(false);
        let cache_dir = (!no_cache).then(|| {
            args.cache_dir
                .clone()
                .or_else(|| file.cache_dir.clone())
                .or(env_cache_dir)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
        });
        Ok(Settings {
            physics,
            execution: Execution {
                jobs: args.jobs.or(file.jobs),
                cache_dir,
                out: args.out.clone().or_else(|| file.out.clone()),
            },
        })
    }
}

impl Physics {
    fn check(&self) -> CliResult<()> {
        xyquench::ModelParams::new(self.gamma, 0.0)?;
        let finite = [self.t_min, self.t_max, self.t_step, self.a_min, self.a_max, self.a_step, self.eps_ent];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(param("grid values must be finite"));
        }
        if let Some(t) = self.t {
            if !(t.is_finite() && t >= 0.0) {
                return Err(param(format!("--t must be finite and >= 0, got {t}")));
            }
        }
        if self.t_min < 0.0 || self.t_max < self.t_min || self.t_step <= 0.0 {
            return Err(param("time grid needs 0 <= t-min <= t-max and t-step > 0"));
        }
        if self.a_min < 0.0 || self.a_max <= self.a_min || self.a_step <= 0.0 {
            return Err(param("field grid needs 0 <= a-min < a-max and a-step > 0"));
        }
        if self.eps_ent <= 0.0 {
            return Err(param("--eps-ent must be positive"));
        }
        if let Some(m) = self.m {
            if !(m > 0.0) {
                return Err(CliError::Core(xyquench::Error::NonpositiveScale(m)));
            }
        }
        Ok(())
    }

    /// Points used on `[0, 2]` by area commands.
    pub fn area_points(&self) -> CliResult<usize> {
        let n = (2.0 / self.a_step).round() as usize + 1;
        if self.a_step > DEFAULT_MAX_SPACING * (1.0 + 1e-9) || n < 101 {
            return Err(param(format!(
                "area commands need --a-step <= {DEFAULT_MAX_SPACING}, got {}",
                self.a_step
            )));
        }
        Ok(n)
    }
}
