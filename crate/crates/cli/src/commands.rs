//! Command implementations. Each command computes everything first and
//! writes its files only once nothing can fail any more.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;
use heston_calib::calibration::{
    calibrate, generate_dataset, nest_count_experiment, price_count_experiment, DatasetSpec,
    ExperimentSetup,
};
use heston_calib::cuckoo::{CuckooConfig, SearchSpace};
use heston_calib::pricing::{
    price_american_put_lsmc, price_european_call_cf, price_european_put_cf,
};
use heston_calib::{
    CalibrationProblem, CalibrationResult, HestonParams, OptionKind, PricerConfig, QuoteSet,
};
use serde_json::{json, Value};

use crate::config::{axis_name, ParamValues, RunConfig};
use crate::io::{self, Outputs};
use crate::{Classify, Failure};

pub const PARAM_NAMES: [&str; 5] = ["sqrt_v0", "sigma", "kappa", "theta", "rho"];

fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn pricer_json(p: &PricerConfig) -> Value {
    json!({
        "n_paths": p.n_paths,
        "n_steps_per_year": p.n_steps_per_year,
        "basis_degree": p.basis_degree,
        "antithetic": p.antithetic,
        "seed": p.seed,
    })
}

fn cuckoo_json(c: &CuckooConfig<f64>) -> Value {
    json!({
        "n_nests": c.n_nests,
        "max_iter": c.max_iter,
        "tol": c.tol,
        "p_max": c.p_max,
        "p_min": c.p_min,
        "levy_beta": c.levy_beta,
        "step_scale": c.step_scale,
        "seed": c.seed,
    })
}

fn spec_json(s: &DatasetSpec<f64>) -> Value {
    json!({
        "fixed_price": s.fixed_price,
        "grid_min": s.grid_min,
        "grid_max": s.grid_max,
        "grid_step": s.grid_step,
        "vary": axis_name(s.vary),
        "rate": s.rate,
        "maturities": s.maturities,
        "style": s.style.to_string(),
    })
}

fn params_json(p: &HestonParams<f64>) -> Value {
    let mut v = serde_json::to_value(ParamValues::of(p)).expect("plain numbers");
    v["v0"] = json!(p.v0);
    v
}

fn space_json(s: &SearchSpace<f64>) -> Value {
    json!({ "lower": s.lower(), "upper": s.upper() })
}

/// Path of the JSON sidecar next to a quote file.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

struct Dataset {
    quotes: QuoteSet<f64>,
    /// File the quotes came from, or the file they will be written to.
    path: PathBuf,
    /// CSV and sidecar to write when the quotes were generated here.
    generated: Option<(Vec<u8>, Vec<u8>)>,
}

fn generated_dataset(cfg: &RunConfig, csv_path: PathBuf) -> Result<Dataset, Failure> {
    let truth = cfg.truth().usage()?;
    let spec = cfg.dataset_spec().usage()?;
    let seed = cfg.seed().usage()?;
    let quotes = generate_dataset(&truth, &spec).runtime()?;
    let csv = io::quotes_to_csv(&quotes).runtime()?;
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let sidecar = io::json_bytes(&json!({
        "toolkit_version": version(),
        "label": cfg.label(),
        "seed": seed,
        "truth": ParamValues::of(&truth),
        "dataset": spec_json(&spec),
        "pricer": pricer_json(&spec.pricer),
        "n_quotes": quotes.len(),
        "created_unix_seconds": created,
    }))
    .runtime()?;
    // Calibrate against exactly what the file will hold.
    let quotes =
        io::parse_quotes(csv.as_slice(), "generated dataset", cfg.label().to_owned()).runtime()?;
    Ok(Dataset {
        quotes,
        path: csv_path,
        generated: Some((csv, sidecar)),
    })
}

fn load_or_generate(cfg: &RunConfig) -> Result<Dataset, Failure> {
    match &cfg.dataset_path {
        Some(path) => {
            if !path.is_file() {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "dataset {} does not exist",
                    path.display()
                )));
            }
            Ok(Dataset {
                quotes: io::read_quotes(path).usage()?,
                path: path.clone(),
                generated: None,
            })
        }
        None => {
            let path = cfg.output_dir().join(format!("{}.quotes.csv", cfg.label()));
            generated_dataset(cfg, path)
        }
    }
}

fn add_dataset(out: &mut Outputs, d: &mut Dataset) {
    if let Some((csv, sidecar)) = d.generated.take() {
        out.add(sidecar_path(&d.path), sidecar);
        out.add(d.path.clone(), csv);
    }
}

fn report(written: &[PathBuf]) {
    for p in written {
        println!("wrote {}", p.display());
    }
}

pub fn generate(cfg: &RunConfig, out_path: Option<PathBuf>) -> Result<(), Failure> {
    let path =
        out_path.unwrap_or_else(|| cfg.output_dir().join(format!("{}.quotes.csv", cfg.label())));
    let mut d = generated_dataset(cfg, path)?;
    println!("generated {} quotes", d.quotes.len());
    let mut out = Outputs::default();
    add_dataset(&mut out, &mut d);
    report(&out.write_all().runtime()?);
    Ok(())
}

pub enum PriceMode {
    Cf,
    Lsmc,
}

pub struct Instrument {
    pub spot: f64,
    pub strike: f64,
    pub maturity: f64,
    pub rate: f64,
    pub kind: OptionKind,
}

pub fn price(
    params: &HestonParams<f64>,
    inst: &Instrument,
    mode: PriceMode,
    pricer: Option<PricerConfig>,
) -> Result<(), Failure> {
    let Instrument {
        spot,
        strike,
        maturity,
        rate,
        kind,
    } = *inst;
    match mode {
        PriceMode::Cf => {
            let p = match kind {
                OptionKind::Put => price_european_put_cf(params, spot, strike, rate, maturity),
                OptionKind::Call => price_european_call_cf(params, spot, strike, rate, maturity),
            }
            .runtime()?;
            println!("price {p:?}");
        }
        PriceMode::Lsmc => {
            if kind == OptionKind::Call {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "lsmc prices American puts only; use --mode cf for calls"
                )));
            }
            let cfg = pricer.expect("lsmc mode resolves a pricer");
            let est =
                price_american_put_lsmc(params, spot, strike, rate, maturity, &cfg).runtime()?;
            println!("price {:?}", est.price);
            println!("std_error {:?}", est.std_error);
        }
    }
    Ok(())
}

fn problem_for(cfg: &RunConfig, quotes: QuoteSet<f64>) -> Result<CalibrationProblem<f64>, Failure> {
    CalibrationProblem::new(
        quotes,
        cfg.space().usage()?,
        cfg.pricer().usage()?,
        cfg.cuckoo().usage()?,
    )
    .usage()
}

fn result_json(
    cfg: &RunConfig,
    problem: &CalibrationProblem<f64>,
    dataset: &Path,
    r: &CalibrationResult<f64>,
) -> Value {
    json!({
        "toolkit_version": version(),
        "label": cfg.label(),
        "dataset": dataset.display().to_string(),
        "n_quotes": problem.quotes.len(),
        "truth": cfg.truth().ok().map(|t| ParamValues::of(&t)),
        "best": params_json(&r.best),
        "objective": r.objective,
        "iterations": r.iterations(),
        "n_objective_evaluations": r.n_objective_evaluations,
        "n_price_evaluations": r.n_price_evaluations,
        "n_nonfinite": r.trace.last().map_or(0, |t| t.n_nonfinite),
        "wall_time_seconds": r.wall_time.as_secs_f64(),
        "optimizer": cuckoo_json(&problem.cuckoo),
        "pricer": pricer_json(&problem.pricer),
        "bounds": space_json(&problem.space),
    })
}

fn print_result(r: &CalibrationResult<f64>) {
    let x = r.best.to_coordinates();
    println!(
        "objective {:e} after {} iterations ({} evaluations, {:.1}s)",
        r.objective,
        r.iterations(),
        r.n_objective_evaluations,
        r.wall_time.as_secs_f64()
    );
    for (name, v) in PARAM_NAMES.iter().zip(x) {
        println!("  {name:<8} {v}");
    }
}

pub fn calibrate_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let mut d = load_or_generate(cfg)?;
    let problem = problem_for(cfg, d.quotes.clone())?;
    let r = calibrate(&problem).runtime()?;
    print_result(&r);

    let dir = cfg.output_dir();
    let mut out = Outputs::default();
    add_dataset(&mut out, &mut d);
    out.add(
        dir.join(format!("{}.result.json", cfg.label())),
        io::json_bytes(&result_json(cfg, &problem, &d.path, &r)).runtime()?,
    );
    out.add(
        dir.join(format!("{}.trace.csv", cfg.label())),
        io::trace_to_csv(&r.trace).runtime()?,
    );
    report(&out.write_all().runtime()?);
    Ok(())
}

pub struct SurfaceAxes {
    pub names: [String; 2],
    pub ranges: [Option<(f64, f64)>; 2],
    pub resolution: usize,
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

pub fn surface(cfg: &RunConfig, axes: &SurfaceAxes) -> Result<(), Failure> {
    let idx: Vec<usize> = axes
        .names
        .iter()
        .map(|n| {
            PARAM_NAMES.iter().position(|p| p == n).ok_or_else(|| {
                anyhow::anyhow!(
                    "unknown parameter `{n}` (expected one of {})",
                    PARAM_NAMES.join(", ")
                )
            })
        })
        .collect::<Result<_>>()
        .usage()?;
    if idx[0] == idx[1] {
        return Err(Failure::Usage(anyhow::anyhow!(
            "surface axes must differ, got `{}` twice",
            axes.names[0]
        )));
    }
    if axes.resolution == 0 {
        return Err(Failure::Usage(anyhow::anyhow!(
            "resolution must be at least 1"
        )));
    }
    let base = cfg.truth().usage()?.to_coordinates();
    let space = cfg.space().usage()?;
    let mut ranges = [(0.0, 0.0); 2];
    for k in 0..2 {
        let (lo, hi) = axes.ranges[k].unwrap_or((space.lower()[idx[k]], space.upper()[idx[k]]));
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Failure::Usage(anyhow::anyhow!(
                "invalid range {lo}:{hi} for {}",
                axes.names[k]
            )));
        }
        ranges[k] = (lo, hi);
    }

    let mut d = load_or_generate(cfg)?;
    // The surface is a plain grid scan; the optimizer settings are unused.
    let problem = CalibrationProblem::new(
        d.quotes.clone(),
        space,
        cfg.pricer().usage()?,
        CuckooConfig {
            seed: cfg.seed().usage()?,
            ..CuckooConfig::default()
        },
    )
    .usage()?;
    let xs = grid(ranges[0].0, ranges[0].1, axes.resolution);
    let ys = grid(ranges[1].0, ranges[1].1, axes.resolution);

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([axes.names[0].as_str(), axes.names[1].as_str(), "objective"])
        .runtime()?;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &x in &xs {
        for &y in &ys {
            let mut point = base;
            point[idx[0]] = x;
            point[idx[1]] = y;
            let f = problem.objective_at(&point);
            if f < best.0 {
                best = (f, x, y);
            }
            w.write_record([x.to_string(), y.to_string(), f.to_string()])
                .runtime()?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| anyhow::anyhow!("{e}"))
        .runtime()?;
    println!(
        "minimum {:e} at {} = {}, {} = {}",
        best.0, axes.names[0], best.1, axes.names[1], best.2
    );

    let mut out = Outputs::default();
    add_dataset(&mut out, &mut d);
    out.add(
        cfg.output_dir()
            .join(format!("{}.surface.csv", cfg.label())),
        bytes,
    );
    report(&out.write_all().runtime()?);
    Ok(())
}

fn summary_row(r: &CalibrationResult<f64>, level: f64) -> Value {
    json!({
        "objective": r.objective,
        "iterations": r.iterations(),
        "iterations_to_level": r.iterations_to(level),
        "n_objective_evaluations": r.n_objective_evaluations,
        "best": params_json(&r.best),
        "wall_time_seconds": r.wall_time.as_secs_f64(),
    })
}

pub fn experiment_nests(cfg: &RunConfig, nests: &[usize], level: f64) -> Result<(), Failure> {
    if nests.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!("no nest counts given")));
    }
    let mut d = load_or_generate(cfg)?;
    let problem = problem_for(cfg, d.quotes.clone())?;
    // Validate every count before spending time on any run.
    for &n in nests {
        let c = CuckooConfig {
            n_nests: n,
            ..problem.cuckoo.clone()
        };
        c.validate().usage()?;
    }
    let runs = nest_count_experiment(&problem, nests).runtime()?;

    let dir = cfg.output_dir();
    let mut out = Outputs::default();
    add_dataset(&mut out, &mut d);
    let mut rows = Vec::new();
    println!("nests  objective     iterations to {level:e}");
    for run in &runs {
        let r = &run.result;
        println!(
            "{:>5}  {:<12.4e}  {}",
            run.n_nests,
            r.objective,
            r.iterations_to(level)
                .map_or_else(|| "not reached".into(), |i| i.to_string())
        );
        let mut row = summary_row(r, level);
        row["n_nests"] = json!(run.n_nests);
        rows.push(row);
        out.add(
            dir.join(format!("{}.nests-{}.trace.csv", cfg.label(), run.n_nests)),
            io::trace_to_csv(&r.trace).runtime()?,
        );
    }
    let summary = json!({
        "toolkit_version": version(),
        "label": cfg.label(),
        "dataset": d.path.display().to_string(),
        "level": level,
        "optimizer": cuckoo_json(&problem.cuckoo),
        "pricer": pricer_json(&problem.pricer),
        "runs": rows,
    });
    out.add(
        dir.join(format!("{}.nests.json", cfg.label())),
        io::json_bytes(&summary).runtime()?,
    );
    report(&out.write_all().runtime()?);
    Ok(())
}

pub fn experiment_prices(
    cfg: &RunConfig,
    counts: &[usize],
    maturity: f64,
    level: f64,
) -> Result<(), Failure> {
    if counts.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!("no price counts given")));
    }
    let truth = cfg.truth().usage()?;
    let setup = ExperimentSetup {
        dataset: cfg.dataset_spec().usage()?,
        space: cfg.space().usage()?,
        cuckoo: cfg.cuckoo().usage()?,
    };
    let available = setup.dataset.grid().usage()?.len();
    if let Some(&c) = counts.iter().find(|&&c| c == 0 || c > available) {
        return Err(Failure::Usage(anyhow::anyhow!(
            "cannot pick {c} prices from a grid of {available}"
        )));
    }
    if !(maturity > 0.0 && maturity.is_finite()) {
        return Err(Failure::Usage(anyhow::anyhow!(
            "maturity must be positive, got {maturity}"
        )));
    }
    let runs = price_count_experiment(&truth, counts, maturity, &setup).runtime()?;

    let dir = cfg.output_dir();
    let mut out = Outputs::default();
    let mut rows = Vec::new();
    println!("prices  objective     iterations to {level:e}");
    for run in &runs {
        let r = &run.result;
        println!(
            "{:>6}  {:<12.4e}  {}",
            run.n_prices,
            r.objective,
            r.iterations_to(level)
                .map_or_else(|| "not reached".into(), |i| i.to_string())
        );
        let mut row = summary_row(r, level);
        row["n_prices"] = json!(run.n_prices);
        row["strikes"] = json!(run.quotes.iter().map(|q| q.strike).collect::<Vec<_>>());
        rows.push(row);
        out.add(
            dir.join(format!("{}.prices-{}.trace.csv", cfg.label(), run.n_prices)),
            io::trace_to_csv(&r.trace).runtime()?,
        );
    }
    let reached: Vec<Option<usize>> = runs.iter().map(|r| r.result.iterations_to(level)).collect();
    let fewer_with_more = fewer_iterations_with_more_prices(counts, &reached);
    match fewer_with_more {
        Some(true) => println!("more prices needed fewer iterations"),
        Some(false) => println!("more prices did not consistently need fewer iterations"),
        None => println!("not every run reached {level:e}; no iteration comparison"),
    }
    let summary = json!({
        "toolkit_version": version(),
        "label": cfg.label(),
        "truth": ParamValues::of(&truth),
        "maturity": maturity,
        "level": level,
        "fewer_iterations_with_more_prices": fewer_with_more,
        "optimizer": cuckoo_json(&setup.cuckoo),
        "runs": rows,
    });
    out.add(
        dir.join(format!("{}.prices.json", cfg.label())),
        io::json_bytes(&summary).runtime()?,
    );
    report(&out.write_all().runtime()?);
    Ok(())
}

/// Whether iterations-to-level never increase as the price count grows.
/// `None` when some run never reached the level.
pub fn fewer_iterations_with_more_prices(
    counts: &[usize],
    reached: &[Option<usize>],
) -> Option<bool> {
    let mut pairs: Vec<(usize, usize)> = counts
        .iter()
        .zip(reached)
        .map(|(&c, r)| r.map(|i| (c, i)))
        .collect::<Option<_>>()?;
    pairs.sort_unstable();
    Some(pairs.windows(2).all(|w| w[1].1 <= w[0].1))
}
