//! Command-line front end for Heston calibration with cuckoo search.

mod commands;
mod config;
mod io;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heston_calib::{HestonParams, OptionKind};

use commands::{Instrument, PriceMode, SurfaceAxes};
use config::{BoundsSpec, ParamValues, ParamsSpec, RunConfig};

/// How a failed command should be reported.
pub enum Failure {
    /// Bad arguments, configuration or input files. Exit status 1.
    Usage(anyhow::Error),
    /// Failure while computing. Exit status 2.
    Runtime(anyhow::Error),
}

pub trait Classify<T> {
    fn usage(self) -> Result<T, Failure>;
    fn runtime(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.into()))
    }

    fn runtime(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Runtime(e.into()))
    }
}

#[derive(Parser)]
#[command(name = "heston-calib", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic quote dataset from known parameters.
    Generate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        pricer: PricerArgs,
        /// Output CSV path (default `<out-dir>/<label>.quotes.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Price a single option.
    Price(PriceArgs),
    /// Calibrate parameters to a dataset.
    Calibrate(RunArgs),
    /// Tabulate the objective over a grid of two parameters.
    Surface {
        #[command(flatten)]
        run: RunArgs,
        /// Two parameter names, e.g. `sigma,kappa`.
        #[arg(long, value_delimiter = ',', default_value = "sigma,kappa")]
        vary: Vec<String>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 20)]
        resolution: usize,
        /// Range of the first parameter as `lo:hi` (default: its bounds).
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        x_range: Option<(f64, f64)>,
        /// Range of the second parameter as `lo:hi` (default: its bounds).
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        y_range: Option<(f64, f64)>,
    },
    /// Calibrate once per nest count and compare convergence.
    ExperimentNests {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,35,50")]
        nests_list: Vec<usize>,
        /// Objective level used to count iterations.
        #[arg(long, default_value_t = 1e-6)]
        level: f64,
    },
    /// Calibrate on subsets of one maturity's quotes and compare convergence.
    ExperimentPrices {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,13,21")]
        counts: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        maturity: f64,
        #[arg(long, default_value_t = 1e-6)]
        level: f64,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Parameter preset for the true model (set1 to set4).
    #[arg(long)]
    set: Option<String>,
}

#[derive(Args)]
struct DataArgs {
    /// american or european.
    #[arg(long)]
    style: Option<String>,
    #[arg(long)]
    fixed_price: Option<f64>,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    /// strike or spot.
    #[arg(long)]
    grid_axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rate: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    maturities: Option<Vec<f64>>,
}

#[derive(Args)]
struct PricerArgs {
    #[arg(long)]
    n_paths: Option<usize>,
    #[arg(long)]
    n_steps_per_year: Option<usize>,
    #[arg(long)]
    basis_degree: Option<usize>,
    #[arg(long)]
    no_antithetic: bool,
    /// Seed for the simulated paths (default: the run seed).
    #[arg(long)]
    pricer_seed: Option<u64>,
}

#[derive(Args)]
struct OptimizerArgs {
    #[arg(long)]
    nests: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    levy_beta: Option<f64>,
    #[arg(long)]
    step_scale: Option<f64>,
    /// paper-bounds or wide-bounds.
    #[arg(long)]
    bounds: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Quote CSV to calibrate against; generated from `--set` when absent.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pricer: PricerArgs,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cf,
    Lsmc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Put,
    Call,
}

#[derive(Args)]
struct PriceArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter preset (set1 to set4).
    #[arg(long, conflicts_with_all = ["sqrt_v0", "sigma", "kappa", "theta", "rho"])]
    set: Option<String>,
    #[arg(long, requires_all = ["sigma", "kappa", "theta", "rho"])]
    sqrt_v0: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long)]
    spot: f64,
    #[arg(long)]
    strike: f64,
    #[arg(long)]
    maturity: f64,
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    rate: f64,
    #[arg(long, value_enum, default_value_t = Kind::Put)]
    kind: Kind,
    #[arg(long, value_enum, default_value_t = Mode::Cf)]
    mode: Mode,
    #[command(flatten)]
    pricer: PricerArgs,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(lo)?, num(hi)?))
}

fn set_if<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

impl Common {
    fn apply(self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load_or_default(self.config.as_deref())?;
        set_if(&mut cfg.seed, self.seed);
        set_if(&mut cfg.label, self.label);
        set_if(&mut cfg.output_dir, self.out_dir);
        set_if(&mut cfg.truth, self.set.map(ParamsSpec::Preset));
        Ok(cfg)
    }
}

impl DataArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let d = &mut cfg.dataset;
        set_if(&mut d.style, self.style);
        set_if(&mut d.fixed_price, self.fixed_price);
        set_if(&mut d.grid_min, self.grid_min);
        set_if(&mut d.grid_max, self.grid_max);
        set_if(&mut d.grid_step, self.grid_step);
        set_if(&mut d.vary, self.grid_axis);
        set_if(&mut d.rate, self.rate);
        set_if(&mut d.maturities, self.maturities);
    }
}

impl PricerArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let p = &mut cfg.pricer;
        set_if(&mut p.n_paths, self.n_paths);
        set_if(&mut p.n_steps_per_year, self.n_steps_per_year);
        set_if(&mut p.basis_degree, self.basis_degree);
        if self.no_antithetic {
            p.antithetic = Some(false);
        }
        set_if(&mut p.seed, self.pricer_seed);
    }
}

impl OptimizerArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let o = &mut cfg.optimizer;
        set_if(&mut o.n_nests, self.nests);
        set_if(&mut o.max_iter, self.max_iter);
        set_if(&mut o.tol, self.tol);
        set_if(&mut o.p_max, self.p_max);
        set_if(&mut o.p_min, self.p_min);
        set_if(&mut o.levy_beta, self.levy_beta);
        set_if(&mut o.step_scale, self.step_scale);
        set_if(&mut cfg.bounds, self.bounds.map(BoundsSpec::Preset));
    }
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = self.common.apply()?;
        set_if(&mut cfg.dataset_path, self.dataset);
        self.data.apply(&mut cfg);
        self.pricer.apply(&mut cfg);
        self.optimizer.apply(&mut cfg);
        Ok(cfg)
    }
}

impl PriceArgs {
    fn params(&self, cfg: &RunConfig) -> Result<HestonParams<f64>> {
        if let Some(name) = &self.set {
            return ParamsSpec::Preset(name.clone()).resolve();
        }
        if let (Some(sqrt_v0), Some(sigma), Some(kappa), Some(theta), Some(rho)) =
            (self.sqrt_v0, self.sigma, self.kappa, self.theta, self.rho)
        {
            return ParamsSpec::Values(ParamValues {
                sqrt_v0,
                sigma,
                kappa,
                theta,
                rho,
            })
            .resolve();
        }
        cfg.truth()
            .map_err(|_| anyhow!("give --set or all of --sqrt-v0 --sigma --kappa --theta --rho"))
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate {
            common,
            data,
            pricer,
            out,
        } => {
            let mut cfg = common.apply().usage()?;
            data.apply(&mut cfg);
            pricer.apply(&mut cfg);
            commands::generate(&cfg, out)
        }
        Command::Price(args) => {
            let mut cfg = RunConfig::load_or_default(args.config.as_deref()).usage()?;
            set_if(&mut cfg.seed, args.seed);
            let params = args.params(&cfg).usage()?;
            let inst = Instrument {
                spot: args.spot,
                strike: args.strike,
                maturity: args.maturity,
                rate: args.rate,
                kind: match args.kind {
                    Kind::Put => OptionKind::Put,
                    Kind::Call => OptionKind::Call,
                },
            };
            let (mode, pricer) = match args.mode {
                Mode::Cf => (PriceMode::Cf, None),
                Mode::Lsmc => {
                    args.pricer.apply(&mut cfg);
                    (PriceMode::Lsmc, Some(cfg.pricer().usage()?))
                }
            };
            commands::price(&params, &inst, mode, pricer)
        }
        Command::Calibrate(run) => commands::calibrate_cmd(&run.into_config().usage()?),
        Command::Surface {
            run,
            vary,
            resolution,
            x_range,
            y_range,
        } => {
            let cfg = run.into_config().usage()?;
            let [a, b]: [String; 2] = vary
                .try_into()
                .map_err(|_| Failure::Usage(anyhow!("--vary takes exactly two names")))?;
            let axes = SurfaceAxes {
                names: [a, b],
                ranges: [x_range, y_range],
                resolution,
            };
            commands::surface(&cfg, &axes)
        }
        Command::ExperimentNests {
            run,
            nests_list,
            level,
        } => commands::experiment_nests(&run.into_config().usage()?, &nests_list, level),
        Command::ExperimentPrices {
            run,
            counts,
            maturity,
            level,
        } => commands::experiment_prices(&run.into_config().usage()?, &counts, maturity, level),
    }
}

fn report(kind: &str, e: impl Display) {
    eprintln!("error ({kind}): {e:#}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            report("usage", format!("{e:#}"));
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            report("runtime", format!("{e:#}"));
            ExitCode::from(2)
        }
    }
}
