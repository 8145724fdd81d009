use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use stablelike_core::census::ScaleLadder;
use stablelike_core::fractal::{geometric_radii, BoxCounter, LocalDimWindow};
use stablelike_core::process::BetaFunction;

/// Environment variable holding the output directory used when neither the
/// command line nor the config file names one.
pub const OUT_ENV: &str = "STABLELIKE_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// The stability index map, either constant or piecewise linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BetaSpec {
    Constant { alpha: f64 },
    Piecewise { epsilon0: f64, knots: Vec<(f64, f64)> },
}

impl BetaSpec {
    pub fn build(&self) -> Result<BetaFunction> {
        Ok(match self {
            BetaSpec::Constant { alpha } => BetaFunction::constant(*alpha)?,
            BetaSpec::Piecewise { epsilon0, knots } => BetaFunction::new(*epsilon0, knots.clone())?,
        })
    }

    pub fn constant_alpha(&self) -> Option<f64> {
        match self {
            BetaSpec::Constant { alpha } => Some(*alpha),
            BetaSpec::Piecewise { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorConfig {
    /// Ball radii for local dimensions.
    pub r_min: f64,
    pub r_max: f64,
    pub per_decade: u32,
    /// Box-counting depths.
    pub j_min: u32,
    pub j_max: u32,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-6,
            r_max: 1e-2,
            per_decade: 4,
            j_min: 7,
            j_max: 19,
        }
    }
}

impl EstimatorConfig {
    pub fn window(&self) -> LocalDimWindow {
        LocalDimWindow {
            r_min: self.r_min,
            r_max: self.r_max,
            per_decade: self.per_decade,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderConfig {
    pub eta0: f64,
    pub eps: f64,
    /// `log₂` of the smallest scale.
    pub log2_floor: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            eta0: (-8f64).exp2(),
            eps: 0.1,
            log2_floor: -20.0,
        }
    }
}

impl LadderConfig {
    pub fn build(&self) -> Result<ScaleLadder> {
        Ok(ScaleLadder::with_log2_floor(self.eta0, self.eps, self.log2_floor)?)
    }
}

/// Everything that determines the output of a run, apart from the
/// subcommand's own flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: u64,
    pub horizon: f64,
    pub z_min: f64,
    pub beta: BetaSpec,
    pub estimator: EstimatorConfig,
    pub ladder: LadderConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1,
            horizon: 1.0,
            z_min: 1e-4,
            beta: BetaSpec::Piecewise {
                epsilon0: 0.3,
                knots: vec![(0.0, 0.3), (1.0, 0.7)],
            },
            estimator: EstimatorConfig::default(),
            ladder: LadderConfig::default(),
            out: None,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Checks every numeric domain, so that errors surface before sampling.
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            bail!("horizon must be finite and positive, got {}", self.horizon);
        }
        if !(self.z_min > 0.0 && self.z_min < 1.0) {
            bail!("z_min must lie in (0, 1), got {}", self.z_min);
        }
        self.beta.build().context("invalid beta")?;
        let e = &self.estimator;
        geometric_radii(e.r_min, e.r_max, e.per_decade).context("invalid estimator radii")?;
        BoxCounter::new(e.j_min, e.j_max).context("invalid box-counting depths")?;
        self.ladder.build().context("invalid ladder")?;
        Ok(())
    }

    /// Output directory: the config value, then `$STABLELIKE_OUT`, then `out`.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}
