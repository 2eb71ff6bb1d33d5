//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. `problem` selects
//! the preset every other key overrides; keys may appear in any order but
//! at most once.

use std::collections::BTreeMap;
use std::path::PathBuf;

use afvlasov::{DistributionParams, DomainSpec, ProblemKind, Quadrature, Scheme, SimConfig, Splitting};

use crate::CliError;

pub const KEYS: &[&str] = &[
    "problem",
    "scheme",
    "splitting",
    "cfl",
    "t_max",
    "n_x",
    "n_v",
    "x_min",
    "x_max",
    "v_min",
    "v_max",
    "A",
    "k",
    "v0",
    "alpha",
    "beta",
    "init_quadrature",
    "diag_every",
    "snapshot_times",
    "e_max_estimate",
    "output_dir",
];

pub fn parse_config(text: &str) -> Result<SimConfig, CliError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = n + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(lineno, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(config_err(lineno, format!("unknown key `{key}`")));
        }
        if entries.insert(key, (lineno, value)).is_some() {
            return Err(config_err(lineno, format!("duplicate key `{key}`")));
        }
    }

    let kind = match entries.get("problem") {
        Some(&(line, v)) => ProblemKind::parse(v).ok_or_else(|| config_err(line, format!("unknown problem `{v}`")))?,
        None => ProblemKind::WeakLandau,
    };
    let mut cfg = SimConfig::preset(kind);
    let d = cfg.domain;
    let (mut x_min, mut x_max, mut v_min, mut v_max, mut n_x, mut n_v) =
        (d.x_min, d.x_max, d.v_min, d.v_max, d.n_x, d.n_v);
    let (mut alpha, mut beta) = (cfg.distribution.alpha(), cfg.distribution.beta());

    for (&key, &(line, value)) in &entries {
        let float = || parse_float(line, key, value);
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| config_err(line, format!("`{key}` expects a non-negative integer, got `{value}`")))
        };
        match key {
            "problem" => {}
            "scheme" => {
                cfg.scheme =
                    Scheme::parse(value).ok_or_else(|| config_err(line, format!("unknown scheme `{value}`")))?
            }
            "splitting" => {
                cfg.splitting =
                    Splitting::parse(value).ok_or_else(|| config_err(line, format!("unknown splitting `{value}`")))?
            }
            "init_quadrature" => {
                cfg.init_quadrature = Quadrature::parse(value)
                    .ok_or_else(|| config_err(line, format!("unknown init_quadrature `{value}`")))?
            }
            "cfl" => cfg.cfl = float()?,
            "t_max" => cfg.t_max = float()?,
            "n_x" => n_x = count()?,
            "n_v" => n_v = count()?,
            "x_min" => x_min = float()?,
            "x_max" => x_max = float()?,
            "v_min" => v_min = float()?,
            "v_max" => v_max = float()?,
            "A" => cfg.problem.amplitude = float()?,
            "k" => cfg.problem.wavenumber = float()?,
            "v0" => cfg.problem.beam_velocity = float()?,
            "alpha" => alpha = float()?,
            "beta" => beta = float()?,
            "diag_every" => cfg.diag_every = count()?,
            "e_max_estimate" => cfg.e_max_estimate = float()?,
            "snapshot_times" => {
                cfg.snapshot_times = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_float(line, key, s))
                    .collect::<Result<_, _>>()?
            }
            "output_dir" => cfg.output_dir = PathBuf::from(value),
            _ => unreachable!("keys are checked against KEYS"),
        }
    }

    cfg.domain = DomainSpec::new(x_min, x_max, v_min, v_max, n_x, n_v).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.distribution = DistributionParams::new(alpha, beta).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

/// Plain float, `pi`, or a ratio of those such as `1/pi` or `-2*pi`.
fn parse_float(line: usize, key: &str, value: &str) -> Result<f64, CliError> {
    fn atom(s: &str) -> Option<f64> {
        let s = s.trim();
        match s {
            "pi" => Some(std::f64::consts::PI),
            "-pi" => Some(-std::f64::consts::PI),
            _ => s.parse().ok(),
        }
    }
    fn product(s: &str) -> Option<f64> {
        s.split('*').map(atom).try_fold(1.0, |acc, f| f.map(|f| acc * f))
    }
    let parsed = match value.split_once('/') {
        Some((num, den)) => product(num).zip(product(den)).map(|(n, d)| n / d),
        None => product(value),
    };
    parsed
        .filter(|f| f.is_finite())
        .ok_or_else(|| config_err(line, format!("`{key}` expects a number, got `{value}`")))
}

fn config_err(line: usize, msg: String) -> CliError {
    CliError::Config(format!("line {line}: {msg}"))
}
