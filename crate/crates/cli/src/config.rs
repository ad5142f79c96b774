use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::Serialize;

use crate::error::CliError;

/// Options shared by every subcommand. Each may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Plain-text `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Half-width of the periodic grid window.
    #[arg(long = "L", global = true)]
    pub half_width: Option<f64>,
    /// Number of grid nodes (power of two, at least 64).
    #[arg(long = "N", global = true)]
    pub n_points: Option<usize>,
    #[arg(long, global = true)]
    pub quad_rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub n_paths: Option<usize>,
    #[arg(long, global = true)]
    pub n_samples: Option<usize>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Half-range of the x grid for tables on the line.
    #[arg(long, global = true)]
    pub x_max: Option<f64>,
    #[arg(long, global = true)]
    pub r_min: Option<f64>,
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// `indicator|gaussian|triangle:center=..,width=..,height=..` or a CSV path.
    #[arg(long, global = true)]
    pub mu_plus: Option<String>,
    #[arg(long, global = true)]
    pub mu_minus: Option<String>,
    #[arg(long, global = true)]
    pub output_path: Option<PathBuf>,
}

/// Fully resolved configuration, recorded in every manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliConfig {
    pub alpha: f64,
    pub dim: usize,
    pub t: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub n_points: usize,
    pub quad_rel_tol: f64,
    pub seed: Option<u64>,
    pub n_paths: usize,
    pub n_samples: usize,
    pub dt: f64,
    pub x0: f64,
    pub x_max: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub mu_plus: String,
    pub mu_minus: String,
    pub output_path: PathBuf,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            dim: 1,
            t: 2.0,
            half_width: 16.0,
            n_points: 256,
            quad_rel_tol: 1e-10,
            seed: None,
            n_paths: 100_000,
            n_samples: 100_000,
            dt: 1.0 / 256.0,
            x0: 0.0,
            x_max: 10.0,
            r_min: 1e-3,
            r_max: 10.0,
            points: 201,
            mu_plus: "indicator:center=0,width=1,height=0.5".into(),
            mu_minus: "indicator:center=0,width=2,height=1".into(),
            output_path: PathBuf::from("geostable-out"),
        }
    }
}

const KEYS: [&str; 18] = [
    "alpha",
    "dim",
    "t",
    "L",
    "N",
    "quad_rel_tol",
    "seed",
    "n_paths",
    "n_samples",
    "dt",
    "x0",
    "x_max",
    "r_min",
    "r_max",
    "points",
    "mu_plus",
    "mu_minus",
    "output_path",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", no + 1)))?;
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("config line {}: unknown key '{key}'", no + 1)));
        }
        out.insert(key.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn pick<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(s) => s.parse().map_err(|_| CliError::Config(format!("config key {key}: cannot parse '{s}'"))),
        None => Ok(default),
    }
}

impl CliConfig {
    /// Flag, then config file, then default.
    pub fn resolve(args: &ConfigArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let d = Self::default();
        let seed = match args.seed {
            Some(s) => Some(s),
            None => file
                .get("seed")
                .map(|s| s.parse().map_err(|_| CliError::Config(format!("config key seed: cannot parse '{s}'"))))
                .transpose()?,
        };
        let cfg = Self {
            alpha: pick(args.alpha, &file, "alpha", d.alpha)?,
            dim: pick(args.dim, &file, "dim", d.dim)?,
            t: pick(args.t, &file, "t", d.t)?,
            half_width: pick(args.half_width, &file, "L", d.half_width)?,
            n_points: pick(args.n_points, &file, "N", d.n_points)?,
            quad_rel_tol: pick(args.quad_rel_tol, &file, "quad_rel_tol", d.quad_rel_tol)?,
            seed,
            n_paths: pick(args.n_paths, &file, "n_paths", d.n_paths)?,
            n_samples: pick(args.n_samples, &file, "n_samples", d.n_samples)?,
            dt: pick(args.dt, &file, "dt", d.dt)?,
            x0: pick(args.x0, &file, "x0", d.x0)?,
            x_max: pick(args.x_max, &file, "x_max", d.x_max)?,
            r_min: pick(args.r_min, &file, "r_min", d.r_min)?,
            r_max: pick(args.r_max, &file, "r_max", d.r_max)?,
            points: pick(args.points, &file, "points", d.points)?,
            mu_plus: pick(args.mu_plus.clone(), &file, "mu_plus", d.mu_plus)?,
            mu_minus: pick(args.mu_minus.clone(), &file, "mu_minus", d.mu_minus)?,
            output_path: pick(args.output_path.clone(), &file, "output_path", d.output_path)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level checks; each message names the violated invariant.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return fail(format!("alpha must satisfy 0 < alpha <= 2, got {}", self.alpha));
        }
        if self.dim == 0 {
            return fail("dim must be at least 1, got 0".into());
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return fail(format!("t must be positive, got {}", self.t));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return fail(format!("L must be positive, got {}", self.half_width));
        }
        if self.n_points < 64 || !self.n_points.is_power_of_two() {
            return fail(format!("N must be a power of two >= 64, got {}", self.n_points));
        }
        if !(self.quad_rel_tol > 0.0 && self.quad_rel_tol < 1e-2) {
            return fail(format!("quad_rel_tol must satisfy 0 < quad_rel_tol < 1e-2, got {}", self.quad_rel_tol));
        }
        if self.n_paths < 2 {
            return fail(format!("n_paths must be at least 2, got {}", self.n_paths));
        }
        if self.n_samples < 1000 {
            return fail(format!("n_samples must be at least 1000, got {}", self.n_samples));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return fail(format!("dt must be positive, got {}", self.dt));
        }
        if !self.x0.is_finite() {
            return fail(format!("x0 must be finite, got {}", self.x0));
        }
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return fail(format!("x_max must be positive, got {}", self.x_max));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return fail(format!("need 0 < r_min < r_max, got r_min = {}, r_max = {}", self.r_min, self.r_max));
        }
        if self.points < 2 {
            return fail(format!("points must be at least 2, got {}", self.points));
        }
        Ok(())
    }

    /// The resolved configuration in the `--config` file format.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("alpha", self.alpha.to_string());
        put("dim", self.dim.to_string());
        put("t", self.t.to_string());
        put("L", self.half_width.to_string());
        put("N", self.n_points.to_string());
        put("quad_rel_tol", self.quad_rel_tol.to_string());
        if let Some(s) = self.seed {
            put("seed", s.to_string());
        }
        put("n_paths", self.n_paths.to_string());
        put("n_samples", self.n_samples.to_string());
        put("dt", self.dt.to_string());
        put("x0", self.x0.to_string());
        put("x_max", self.x_max.to_string());
        put("r_min", self.r_min.to_string());
        put("r_max", self.r_max.to_string());
        put("points", self.points.to_string());
        put("mu_plus", self.mu_plus.clone());
        put("mu_minus", self.mu_minus.clone());
        put("output_path", self.output_path.display().to_string());
        out
    }

    pub fn require_seed(&self, subcommand: &str) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Config(format!("{subcommand} is a Monte Carlo subcommand and requires --seed")))
    }

    pub fn output_file(&self, name: &str) -> PathBuf {
        self.output_path.join(name)
    }
}

pub fn is_csv_path(spec: &str) -> bool {
    Path::new(spec).extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_file_beats_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# comment\nalpha = 1.0\nN = 512\n").unwrap();
        let args = ConfigArgs { config: Some(path), n_points: Some(128), ..Default::default() };
        let cfg = CliConfig::resolve(&args).unwrap();
        assert_eq!(cfg.alpha, 1.0);
        assert_eq!(cfg.n_points, 128);
        assert_eq!(cfg.t, CliConfig::default().t);
    }

    #[test]
    fn config_text_round_trips() {
        let cfg = CliConfig { seed: Some(7), alpha: 0.75, ..Default::default() };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, cfg.to_config_text()).unwrap();
        let back = CliConfig::resolve(&ConfigArgs { config: Some(path), ..Default::default() }).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        for text in ["alpha = 2.5", "N = 100", "dim = 0", "bogus = 1", "alpha 1", "t = x"] {
            std::fs::write(&path, text).unwrap();
            let res = CliConfig::resolve(&ConfigArgs { config: Some(path.clone()), ..Default::default() });
            assert!(matches!(res, Err(CliError::Config(_))), "{text}");
        }
    }
}
