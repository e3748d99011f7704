//! Job configuration: an optional TOML file overlaid by command-line flags.

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use symzeta::locator::DEFAULT_T_MIN;
use symzeta::{ComplexPoint, EvalPrecision, Execution, LocatorOptions, Rectangle, TargetValue, Weights};

/// Flags shared by every job-running subcommand. Each one overrides the
/// matching key of the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct JobArgs {
    /// TOML job file; flags win over its keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Weights, comma separated (sorted into non-increasing order)
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_im: Option<f64>,
    /// sigma_min,sigma_max,t_min,t_max
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub region: Option<Vec<f64>>,
    /// Target absolute error of each zeta evaluation
    #[arg(long)]
    pub target_err: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Heights T for count and sum reports, comma separated
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    /// Left edge -y of the counting region
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Run the locator on one thread
    #[arg(long)]
    pub sequential: bool,
}

/// Keys accepted in the TOML job file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub weights: Option<Vec<f64>>,
    pub a_re: Option<f64>,
    pub a_im: Option<f64>,
    pub region: Option<Rectangle>,
    pub precision: Option<EvalPrecision>,
    pub t_grid: Option<Vec<f64>>,
    pub y: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub execution: Option<Execution>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub weights: Weights,
    pub a: TargetValue,
    pub region: Option<Rectangle>,
    pub precision: EvalPrecision,
    pub t_grid: Vec<f64>,
    pub y: f64,
    pub output_dir: PathBuf,
    pub execution: Execution,
}

pub const DEFAULT_T_GRID: [f64; 3] = [50.0, 100.0, 200.0];
pub const DEFAULT_Y: f64 = 5.0;
pub const DEFAULT_OUTPUT_DIR: &str = "symzeta-out";

impl JobConfig {
    pub fn resolve(args: &JobArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };

        let raw = args
            .weights
            .clone()
            .or(file.weights)
            .context("no weights given (--weights or `weights` key)")?;
        if !Weights::was_sorted(&raw) {
            log::info!("weights {raw:?} reordered to non-increasing order");
        }
        let weights = Weights::new(&raw)?;

        let a = ComplexPoint::new(
            args.a_re.or(file.a_re).unwrap_or(0.0),
            args.a_im.or(file.a_im).unwrap_or(0.0),
        );
        let a = TargetValue::new(a)?;

        let region = match &args.region {
            Some(v) => {
                let [s0, s1, t0, t1] = v[..] else {
                    bail!(
                        "--region takes four numbers sigma_min,sigma_max,t_min,t_max, got {}",
                        v.len()
                    );
                };
                Some(Rectangle::new(s0, s1, t0, t1)?)
            }
            None => file.region,
        };
        if let Some(r) = &region {
            r.validate()?;
        }

        let mut precision = file.precision.unwrap_or_default();
        if let Some(e) = args.target_err {
            precision.target_abs_err = e;
        }
        if let Some(n) = args.max_terms {
            precision.max_terms = n;
        }
        precision.validate()?;

        let mut t_grid = args
            .t_grid
            .clone()
            .or(file.t_grid)
            .unwrap_or_else(|| DEFAULT_T_GRID.to_vec());
        if t_grid.is_empty() {
            bail!("T grid is empty");
        }
        if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t > DEFAULT_T_MIN)) {
            bail!("every T must be finite and above t_min = {DEFAULT_T_MIN}, got {t}");
        }
        t_grid.sort_by(f64::total_cmp);
        t_grid.dedup();

        let y = args.y.or(file.y).unwrap_or(DEFAULT_Y);
        if !(y.is_finite() && y > 0.0) {
            bail!("y must be positive, got {y}");
        }

        let execution = if args.sequential {
            Execution::Sequential
        } else {
            file.execution.unwrap_or_default()
        };

        Ok(JobConfig {
            weights,
            a,
            region,
            precision,
            t_grid,
            y,
            output_dir: args
                .output_dir
                .clone()
                .or(file.output_dir)
                .unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into()),
            execution,
        })
    }

    pub fn require_region(&self) -> Result<Rectangle> {
        self.region.context("no region given (--region or a [region] table)")
    }

    pub fn locator_options(&self) -> LocatorOptions {
        LocatorOptions::default().with_execution(self.execution)
    }
}
