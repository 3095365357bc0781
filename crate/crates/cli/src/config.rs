//! The JSON run configuration and its resolution into library types.
//!
//! Every field is optional in the file; command-line flags are applied on
//! top, and [`RunConfig::seed`] must be set by one or the other.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use heston_calib::calibration::{parameter_set_by_name, BoundsPreset, DatasetSpec, GridAxis};
use heston_calib::cuckoo::{CuckooConfig, SearchSpace};
use heston_calib::{ExerciseStyle, HestonParams, PricerConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub label: Option<String>,
    pub seed: Option<u64>,
    pub truth: Option<ParamsSpec>,
    pub dataset_path: Option<PathBuf>,
    #[serde(default)]
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub pricer: PricerSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    pub bounds: Option<BoundsSpec>,
    pub output_dir: Option<PathBuf>,
}

/// A preset name such as `"set1"` or explicit values.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ParamsSpec {
    Preset(String),
    Values(ParamValues),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParamValues {
    pub sqrt_v0: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub theta: f64,
    pub rho: f64,
}

impl ParamValues {
    pub fn of(p: &HestonParams<f64>) -> Self {
        let [sqrt_v0, sigma, kappa, theta, rho] = p.to_coordinates();
        Self {
            sqrt_v0,
            sigma,
            kappa,
            theta,
            rho,
        }
    }
}

impl ParamsSpec {
    pub fn resolve(&self) -> Result<HestonParams<f64>> {
        match self {
            Self::Preset(name) => Ok(parameter_set_by_name(name)?),
            Self::Values(v) => Ok(HestonParams::from_sqrt_v0(
                v.sqrt_v0, v.sigma, v.kappa, v.theta, v.rho,
            )?),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum BoundsSpec {
    Preset(String),
    Explicit { lower: Vec<f64>, upper: Vec<f64> },
}

impl BoundsSpec {
    pub fn resolve(&self) -> Result<SearchSpace<f64>> {
        match self {
            Self::Preset(name) => Ok(name.parse::<BoundsPreset>()?.space()),
            Self::Explicit { lower, upper } => Ok(SearchSpace::new(lower.clone(), upper.clone())?),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub fixed_price: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_step: Option<f64>,
    pub vary: Option<String>,
    pub rate: Option<f64>,
    pub maturities: Option<Vec<f64>>,
    pub style: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PricerSection {
    pub n_paths: Option<usize>,
    pub n_steps_per_year: Option<usize>,
    pub basis_degree: Option<usize>,
    pub antithetic: Option<bool>,
    /// Defaults to the run seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    pub n_nests: Option<usize>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub p_max: Option<f64>,
    pub p_min: Option<f64>,
    pub levy_beta: Option<f64>,
    pub step_scale: Option<f64>,
}

pub fn parse_style(s: &str) -> Result<ExerciseStyle> {
    s.parse().map_err(|e: String| anyhow!(e))
}

pub fn parse_axis(s: &str) -> Result<GridAxis> {
    match s {
        "strike" => Ok(GridAxis::Strike),
        "spot" => Ok(GridAxis::Spot),
        _ => bail!("unknown grid axis `{s}` (expected strike or spot)"),
    }
}

pub fn axis_name(a: GridAxis) -> &'static str {
    match a {
        GridAxis::Strike => "strike",
        GridAxis::Spot => "spot",
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| anyhow!("a seed is required: pass --seed or set \"seed\" in the config"))
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or("run")
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn truth(&self) -> Result<HestonParams<f64>> {
        self.truth
            .as_ref()
            .ok_or_else(|| anyhow!("no truth parameters: pass --set or set \"truth\""))?
            .resolve()
    }

    pub fn pricer(&self) -> Result<PricerConfig> {
        let d = PricerConfig::default();
        let p = &self.pricer;
        let cfg = PricerConfig {
            n_paths: p.n_paths.unwrap_or(d.n_paths),
            n_steps_per_year: p.n_steps_per_year.unwrap_or(d.n_steps_per_year),
            basis_degree: p.basis_degree.unwrap_or(d.basis_degree),
            antithetic: p.antithetic.unwrap_or(d.antithetic),
            seed: match p.seed {
                Some(s) => s,
                None => self.seed()?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dataset_spec(&self) -> Result<DatasetSpec<f64>> {
        let d = DatasetSpec::<f64>::default();
        let c = &self.dataset;
        Ok(DatasetSpec {
            fixed_price: c.fixed_price.unwrap_or(d.fixed_price),
            grid_min: c.grid_min.unwrap_or(d.grid_min),
            grid_max: c.grid_max.unwrap_or(d.grid_max),
            grid_step: c.grid_step.unwrap_or(d.grid_step),
            vary: c
                .vary
                .as_deref()
                .map(parse_axis)
                .transpose()?
                .unwrap_or(d.vary),
            rate: c.rate.unwrap_or(d.rate),
            maturities: c.maturities.clone().unwrap_or(d.maturities),
            style: c
                .style
                .as_deref()
                .map(parse_style)
                .transpose()?
                .unwrap_or(d.style),
            pricer: self.pricer()?,
        })
    }

    pub fn cuckoo(&self) -> Result<CuckooConfig<f64>> {
        let d = CuckooConfig::<f64>::default();
        let o = &self.optimizer;
        let cfg = CuckooConfig {
            n_nests: o.n_nests.unwrap_or(d.n_nests),
            max_iter: o.max_iter.or(d.max_iter),
            tol: o.tol,
            p_max: o.p_max.unwrap_or(d.p_max),
            p_min: o.p_min.unwrap_or(d.p_min),
            levy_beta: o.levy_beta.unwrap_or(d.levy_beta),
            step_scale: o.step_scale.unwrap_or(d.step_scale),
            seed: self.seed()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn space(&self) -> Result<SearchSpace<f64>> {
        self.bounds
            .as_ref()
            .map_or_else(|| Ok(BoundsPreset::Wide.space()), BoundsSpec::resolve)
    }
}
