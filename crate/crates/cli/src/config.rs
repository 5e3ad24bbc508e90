//! Layered settings: built-in defaults, then a `key = value` config file,
//! then command-line flags.
//!
//! Config files are flat UTF-8 text, one `key = value` per line. Blank lines
//! and lines starting with `#` are ignored. List-valued keys (`strategy`,
//! `metric`) take comma-separated items.

use std::collections::BTreeMap;
use std::path::Path;

use pinchperf_core::model::{db_to_linear, dbm_to_watts};
use pinchperf_core::Deployment;

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "PINCHPERF_CONFIG";

/// `(key, default, description)`; the description carries the unit.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("gamma_t_db", "90:115:1", "transmit SNR P_t/sigma2 in dB, scalar or START:STOP:STEP"),
    ("alpha", "0.01", "waveguide absorption in 1/m, scalar or range"),
    ("d_x", "10", "region and waveguide length in m, scalar or range"),
    ("d_y", "10", "region width in m"),
    ("h", "3", "waveguide height in m"),
    ("n_antennas", "1", "antennas N (N-fold power gain)"),
    ("gamma_thr", "100", "SNR threshold, linear"),
    ("f_c", "28e9", "carrier frequency in Hz"),
    ("n_eff", "1.4", "effective refractive index"),
    ("sigma2_dbm", "-90", "noise power in dBm"),
    ("strategy", "pinch-at-user-x,conventional-feed-point", "comma-separated strategies, optional @N suffix"),
    ("metric", "outage", "comma-separated metrics: outage, rate"),
    ("samples", "1000000", "Monte Carlo samples per cell, 0 disables Monte Carlo"),
    ("seed", "1", "Monte Carlo seed"),
    ("format", "csv", "output format: csv or json"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Default,
    ConfigFile,
    CommandLine,
}

pub type RawMap = BTreeMap<String, String>;

/// Parses `key = value` text; unknown keys and malformed lines are errors.
pub fn parse_config(text: &str) -> CliResult<RawMap> {
    let mut map = RawMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::BadInput(format!("config line {}: expected key = value, got {line:?}", i + 1)))?;
        let key = key.trim();
        if !KEYS.iter().any(|(k, _, _)| *k == key) {
            return Err(CliError::BadInput(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> CliResult<RawMap> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::BadInput(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// A closed range `start, start + step, ...` not exceeding `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueSpec {
    Scalar(f64),
    Range(Range),
}

fn parse_number(key: &str, s: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::BadInput(format!("{key}: {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::BadInput(format!("{key}: {s:?} is not finite")));
    }
    Ok(v)
}

pub fn parse_value_spec(key: &str, s: &str) -> CliResult<ValueSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(ValueSpec::Scalar(parse_number(key, v)?)),
        [a, b, c] => {
            let r = Range {
                start: parse_number(key, a)?,
                stop: parse_number(key, b)?,
                step: parse_number(key, c)?,
            };
            if r.step <= 0.0 {
                return Err(CliError::BadInput(format!("{key}: range step must be positive, got {}", r.step)));
            }
            if r.start >= r.stop {
                return Err(CliError::BadInput(format!(
                    "{key}: empty range, start {} must be below stop {}",
                    r.start, r.stop
                )));
            }
            Ok(ValueSpec::Range(r))
        }
        _ => Err(CliError::BadInput(format!("{key}: expected a number or START:STOP:STEP, got {s:?}"))),
    }
}

/// Merged view of all layers.
#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, (String, Source)>,
}

impl Default for Settings {
    fn default() -> Self {
        let values = KEYS
            .iter()
            .map(|(k, v, _)| (k.to_string(), (v.to_string(), Source::Default)))
            .collect();
        Self { values }
    }
}

impl Settings {
    pub fn apply(&mut self, layer: &RawMap, source: Source) {
        for (k, v) in layer {
            self.values.insert(k.clone(), (v.clone(), source));
        }
    }

    pub fn raw(&self, key: &str) -> &str {
        &self.values[key].0
    }

    pub fn source(&self, key: &str) -> Source {
        self.values[key].1
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        parse_number(key, self.raw(key))
    }

    pub fn u64(&self, key: &str) -> CliResult<u64> {
        self.raw(key)
            .trim()
            .parse()
            .map_err(|_| CliError::BadInput(format!("{key}: {:?} is not a non-negative integer", self.raw(key))))
    }

    pub fn spec(&self, key: &str) -> CliResult<ValueSpec> {
        parse_value_spec(key, self.raw(key))
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.raw(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    }

    /// Scalar value of `key`, rejecting ranges.
    pub fn scalar(&self, key: &str) -> CliResult<f64> {
        match self.spec(key)? {
            ValueSpec::Scalar(v) => Ok(v),
            ValueSpec::Range(_) => Err(CliError::BadInput(format!("{key} must be a single value here"))),
        }
    }

    /// Deployment from the scalar keys; `gamma_t_db`, `alpha` and `d_x` are
    /// supplied by the caller since any of them may be a sweep axis.
    pub fn deployment(&self, gamma_t_db: f64, alpha: f64, d_x: f64) -> CliResult<Deployment> {
        let n = self.u64("n_antennas")?;
        let sigma2 = dbm_to_watts(self.f64("sigma2_dbm")?);
        let dep = Deployment {
            d_x,
            d_y: self.f64("d_y")?,
            h: self.f64("h")?,
            alpha,
            f_c: self.f64("f_c")?,
            n_eff: self.f64("n_eff")?,
            p_t: sigma2 * db_to_linear(gamma_t_db),
            sigma2,
            n_antennas: u32::try_from(n).map_err(|_| CliError::BadInput(format!("n_antennas too large: {n}")))?,
        };
        dep.validate().map_err(|e| CliError::BadInput(e.to_string()))?;
        Ok(dep)
    }
}

/// Defaults, then the config file (explicit path or `PINCHPERF_CONFIG`),
/// then the command-line layer.
pub fn resolve(config_path: Option<&Path>, cli: &RawMap) -> CliResult<Settings> {
    let mut settings = Settings::default();
    let env_path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
    let path = config_path.map(Path::to_path_buf).or_else(|| env_path.map(Into::into));
    if let Some(p) = path {
        settings.apply(&load_config(&p)?, Source::ConfigFile);
    }
    settings.apply(cli, Source::CommandLine);
    Ok(settings)
}
