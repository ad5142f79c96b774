use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use geostable::levy::{default_directions, LevyKernel, Regime};
use geostable::schrodinger::{
    feynman_kac_estimate, semigroup_oracle, solve_ground_state, GridDomain, MeasureOnGrid, Profile, SchrodingerProblem,
    SolverConfig,
};
use geostable::stable::RngStream;
use geostable::transition::{density_mc, sample_process, DensityTable};
use geostable::verify::{render_table, run_check, CHECK_NAMES};
use geostable::ProcessSpecF64;
use serde::Serialize;
use serde_json::json;

use crate::config::{is_csv_path, CliConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Inversion,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Core,
}

/// Written next to every set of outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub subcommand: &'a str,
    pub config: &'a CliConfig,
    pub version: String,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
}

/// Collects output files under `output_path` for one subcommand run.
pub struct Run<'a> {
    name: &'a str,
    cfg: &'a CliConfig,
    start: Instant,
    outputs: Vec<String>,
}

impl<'a> Run<'a> {
    pub fn new(name: &'a str, cfg: &'a CliConfig) -> Self {
        Self { name, cfg, start: Instant::now(), outputs: Vec::new() }
    }

    pub fn write(&mut self, file: &str, contents: &str) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.cfg.output_path)?;
        std::fs::write(self.cfg.output_file(file), contents)?;
        self.outputs.push(file.to_string());
        Ok(())
    }

    /// Writes the resolved config and the manifest.
    pub fn finish(mut self) -> Result<(), CliError> {
        let config_name = format!("{}.config", self.name);
        self.write(&config_name, &self.cfg.to_config_text())?;
        let manifest = RunManifest {
            subcommand: self.name,
            config: self.cfg,
            version: format!("geostable {}", env!("CARGO_PKG_VERSION")),
            duration_seconds: self.start.elapsed().as_secs_f64(),
            outputs: self.outputs.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(self.cfg.output_file(&format!("{}.manifest.json", self.name)), text)?;
        Ok(())
    }
}

fn spec(cfg: &CliConfig) -> Result<ProcessSpecF64, CliError> {
    Ok(ProcessSpecF64::new(cfg.alpha, cfg.dim)?)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

pub fn classify(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("classify", cfg);
    let spec = spec(cfg)?;
    let class = spec.recurrence();
    println!("{class}");
    run.write(
        "classify.json",
        &pretty(&json!({
            "alpha": cfg.alpha,
            "dim": cfg.dim,
            "recurrence": class.to_string(),
            "inversion_threshold": spec.inversion_threshold(),
        })),
    )?;
    run.finish()
}

pub fn symbol(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("symbol", cfg);
    let spec = spec(cfg)?;
    let mut csv = String::from("xi,psi,phi\n");
    for xi in linspace(0.0, cfg.x_max, cfg.points) {
        let _ = writeln!(csv, "{xi},{},{}", spec.symbol(xi), spec.char_function(cfg.t, xi));
    }
    run.write("symbol.csv", &csv)?;
    run.finish()
}

pub fn levy(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("levy", cfg);
    let kernel = LevyKernel::new(spec(cfg)?)?;
    let mut csv = String::from("r,j\n");
    for r in logspace(cfg.r_min, cfg.r_max, cfg.points) {
        let _ = writeln!(csv, "{r},{}", kernel.density_radial(r)?);
    }
    let reports = [kernel.asymptotic_report(Regime::SmallX)?, kernel.asymptotic_report(Regime::LargeX)?];
    for r in &reports {
        println!(
            "{:?}: limit {:.6e}, independent {:.6e} (gap {:.2e}), printed {:.6e} (gap {:.2e}), converged {}",
            r.regime,
            r.empirical_limit,
            r.oracle_constant,
            r.relative_gap_oracle,
            r.printed_constant,
            r.relative_gap_printed,
            r.converged
        );
    }
    run.write("levy.csv", &csv)?;
    run.write("levy_asymptotics.json", &pretty(&reports))?;
    run.finish()
}

pub fn kfun(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("kfun", cfg);
    let kernel = LevyKernel::new(spec(cfg)?)?;
    let theta = default_directions::<f64>(cfg.dim, cfg.seed.unwrap_or(0)).swap_remove(0);
    let r_grid = logspace(cfg.r_min, cfg.r_max, cfg.points);
    let table = kernel.self_decomposability(cfg.t, &r_grid, &[theta])?.tables.swap_remove(0);
    println!("monotone certificate: {}", table.monotone_certificate);
    run.write("kfun.csv", &table.to_csv())?;
    run.finish()
}

pub fn selfdecomp(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("selfdecomp", cfg);
    let kernel = LevyKernel::new(spec(cfg)?)?;
    let thetas = default_directions::<f64>(cfg.dim, cfg.seed.unwrap_or(0));
    let r_grid = logspace(cfg.r_min, cfg.r_max, cfg.points);
    let res = kernel.self_decomposability(cfg.t, &r_grid, &thetas)?;
    let summary: Vec<_> = res
        .tables
        .iter()
        .map(|t| json!({ "theta": t.theta, "monotone_certificate": t.monotone_certificate }))
        .collect();
    println!("certified: {} over {} directions", res.certified, res.tables.len());
    run.write("selfdecomp.json", &pretty(&json!({ "certified": res.certified, "directions": summary })))?;
    for (i, t) in res.tables.iter().enumerate() {
        run.write(&format!("selfdecomp_{i}.csv"), &t.to_csv())?;
    }
    run.finish()?;
    if res.certified {
        Ok(())
    } else {
        Err(CliError::Numerical("monotonicity certificate failed".into()))
    }
}

fn line_points(cfg: &CliConfig) -> Vec<Vec<f64>> {
    linspace(-cfg.x_max, cfg.x_max, cfg.points)
        .into_iter()
        .map(|x| {
            let mut p = vec![0.0; cfg.dim];
            p[0] = x;
            p
        })
        .collect()
}

pub fn density(cfg: &CliConfig, method: Method) -> Result<(), CliError> {
    let mut run = Run::new("density", cfg);
    let spec = spec(cfg)?;
    let table = match method {
        Method::Inversion => {
            if !spec.inversion_integrable(cfg.t) {
                return Err(CliError::Config(format!(
                    "inversion requires t > d/alpha, got t = {} <= d/alpha = {}; use --method mc",
                    cfg.t,
                    spec.inversion_threshold()
                )));
            }
            DensityTable::inversion_with_tol(&spec, cfg.t, line_points(cfg), cfg.quad_rel_tol)?
        }
        Method::Mc => {
            let seed = cfg.require_seed("density --method mc")?;
            density_mc(&spec, cfg.t, line_points(cfg), cfg.n_samples, &RngStream::new(seed))?
        }
    };
    run.write("density.csv", &table.to_csv())?;
    run.write("density.json", &table.header_json())?;
    run.finish()
}

pub fn sample(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("sample", cfg);
    let seed = cfg.require_seed("sample")?;
    let spec = spec(cfg)?;
    let xs = sample_process(&spec, cfg.t, cfg.n_samples, &RngStream::new(seed))?;
    let mut csv = if cfg.dim == 1 {
        String::from("x\n")
    } else {
        let cols: Vec<String> = (1..=cfg.dim).map(|i| format!("x{i}")).collect();
        format!("{}\n", cols.join(","))
    };
    for row in xs.chunks(cfg.dim) {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        let _ = writeln!(csv, "{}", cells.join(","));
    }
    run.write("sample.csv", &csv)?;
    run.finish()
}

fn measure(domain: &GridDomain<f64>, spec: &str, label: &str) -> Result<MeasureOnGrid<f64>, CliError> {
    if is_csv_path(spec) {
        let text = std::fs::read_to_string(Path::new(spec))
            .map_err(|e| CliError::Config(format!("cannot read measure file {spec}: {e}")))?;
        Ok(MeasureOnGrid::from_csv(domain, &text, label)?)
    } else {
        let profile: Profile<f64> = spec.parse()?;
        let mut m = MeasureOnGrid::from_profile(domain, &profile)?;
        m.label = label.to_string();
        Ok(m)
    }
}

fn problem(cfg: &CliConfig) -> Result<SchrodingerProblem<f64>, CliError> {
    let domain = GridDomain::new(cfg.half_width, cfg.n_points)?;
    let plus = measure(&domain, &cfg.mu_plus, "mu_plus")?;
    let minus = measure(&domain, &cfg.mu_minus, "mu_minus")?;
    Ok(SchrodingerProblem::new(spec(cfg)?, domain, plus, minus)?)
}

pub fn groundstate(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("groundstate", cfg);
    let p = problem(cfg)?;
    let res = solve_ground_state(&p, SolverConfig::default())?;
    println!("lambda = {} ({} iterations, residual {:.2e})", res.lambda, res.iterations, res.residual);
    run.write("groundstate.json", &res.to_json())?;
    run.write("groundstate.csv", &res.to_csv())?;
    run.finish()
}

pub fn feynman_kac(cfg: &CliConfig) -> Result<(), CliError> {
    let mut run = Run::new("feynman-kac", cfg);
    let seed = cfg.require_seed("feynman-kac")?;
    let p = problem(cfg)?;
    let f = |x: f64| (-x * x).exp();
    let est = feynman_kac_estimate(&p, f, cfg.x0, cfg.t, cfg.n_paths, cfg.dt, &RngStream::new(seed))?;
    let domain = p.domain();
    let grid_f: Vec<f64> = domain.nodes().iter().map(|&x| f(x)).collect();
    let oracle = semigroup_oracle(&p, &grid_f, cfg.t)?[domain.nearest_node(cfg.x0)];
    println!("E[exp(-A_t) f(X_t)] = {} +/- {} (grid semigroup {oracle})", est.mean, est.std_error);
    run.write("feynman_kac.json", &pretty(&json!({ "f": "exp(-x^2)", "estimate": est, "grid_semigroup": oracle })))?;
    run.finish()
}

pub fn kato(cfg: &CliConfig, times: &[f64]) -> Result<(), CliError> {
    let mut run = Run::new("kato", cfg);
    if let Some(t) = times.iter().find(|t| t.is_nan() || **t <= 0.0) {
        return Err(CliError::Config(format!("kato times must be positive, got {t}")));
    }
    let p = problem(cfg)?;
    let values = p.kato_diagnostic(times)?;
    let mut csv = String::from("t,value\n");
    for (t, v) in times.iter().zip(&values) {
        let _ = writeln!(csv, "{t},{v}");
    }
    print!("{csv}");
    run.write("kato.csv", &csv)?;
    run.finish()
}

pub fn verify(cfg: &CliConfig, suite: Suite, checks: &[usize]) -> Result<(), CliError> {
    let mut run = Run::new("verify", cfg);
    let Suite::Core = suite;
    let seed = cfg.require_seed("verify")?;
    if let Some(id) = checks.iter().find(|&&id| !(1..=CHECK_NAMES.len()).contains(&id)) {
        return Err(CliError::Config(format!("check ids run from 1 to {}, got {id}", CHECK_NAMES.len())));
    }
    let ids: Vec<usize> = if checks.is_empty() { (1..=CHECK_NAMES.len()).collect() } else { checks.to_vec() };
    let outcomes: Vec<_> = ids.iter().map(|&id| run_check(id, seed)).collect();
    let table = render_table(&outcomes);
    print!("{table}");
    run.write("verify.txt", &table)?;
    run.write("verify.json", &pretty(&outcomes))?;
    run.finish()?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{failed} acceptance checks failed")))
    }
}
