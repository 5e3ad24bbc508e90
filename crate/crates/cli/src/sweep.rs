//! One-axis parameter sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pinchperf_core::analytics::{avg_rate, outage};
use pinchperf_core::oracles::{
    benchmark_outage_quadrature, benchmark_rate_quadrature, simulate_outage, simulate_rate, McEstimate,
};
use pinchperf_core::{Deployment, Method, Strategy};

use crate::config::{Settings, ValueSpec};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    GammaTDb,
    Alpha,
    DX,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::GammaTDb => "gamma_t_db",
            Axis::Alpha => "alpha",
            Axis::DX => "d_x",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        [Axis::GammaTDb, Axis::Alpha, Axis::DX].into_iter().find(|a| a.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Outage,
    Rate,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Rate => "rate",
        }
    }
}

impl FromStr for Metric {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "outage" => Ok(Metric::Outage),
            "rate" => Ok(Metric::Rate),
            _ => Err(CliError::BadInput(format!("unknown metric {s:?}; expected outage or rate"))),
        }
    }
}

/// A strategy with an optional antenna count overriding the global one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategySpec {
    pub strategy: Strategy,
    pub n_antennas: Option<u32>,
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n_antennas {
            Some(n) => write!(f, "{}@{n}", self.strategy),
            None => write!(f, "{}", self.strategy),
        }
    }
}

impl FromStr for StrategySpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (name, n) = match s.split_once('@') {
            Some((name, n)) => {
                let n: u32 = n
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| CliError::BadInput(format!("strategy {s:?}: antenna count must be a positive integer")))?;
                (name, Some(n))
            }
            None => (s, None),
        };
        let strategy = name
            .parse::<Strategy>()
            .map_err(|e| CliError::BadInput(e.to_string()))?;
        Ok(StrategySpec { strategy, n_antennas: n })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub strategies: Vec<StrategySpec>,
    pub metrics: Vec<Metric>,
    pub n_samples: u64,
    pub seed: u64,
    pub gamma_thr: f64,
    /// Deployment at the first axis value; the axis field is overwritten
    /// per row.
    pub base: Deployment,
}

impl SweepSpec {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let g = s.spec("gamma_t_db")?;
        let a = s.spec("alpha")?;
        let d = s.spec("d_x")?;
        let explicit_g = s.source("gamma_t_db") != crate::config::Source::Default;
        let ranged: Vec<Axis> = [(Axis::GammaTDb, g), (Axis::Alpha, a), (Axis::DX, d)]
            .into_iter()
            .filter(|(axis, v)| matches!(v, ValueSpec::Range(_)) && (*axis != Axis::GammaTDb || explicit_g))
            .map(|(axis, _)| axis)
            .collect();
        let axis = match ranged.as_slice() {
            [] => Axis::GammaTDb,
            [one] => *one,
            _ => {
                return Err(CliError::BadInput(
                    "exactly one of --gamma-t-db, --alpha, --dx may be a range".into(),
                ))
            }
        };
        let scalar_or = |v: ValueSpec, fallback: f64| match v {
            ValueSpec::Scalar(x) => x,
            ValueSpec::Range(_) => fallback,
        };
        let values = match (axis, g, a, d) {
            (Axis::GammaTDb, ValueSpec::Range(r), ..) => r.values(),
            (Axis::GammaTDb, ValueSpec::Scalar(x), ..) => vec![x],
            (Axis::Alpha, _, ValueSpec::Range(r), _) => r.values(),
            (Axis::DX, _, _, ValueSpec::Range(r)) => r.values(),
            _ => unreachable!("axis chosen from ranged keys"),
        };
        let gamma = scalar_or(g, 100.0);
        let alpha = scalar_or(a, values[0]);
        let d_x = scalar_or(d, values[0]);
        let (g0, a0, d0) = match axis {
            Axis::GammaTDb => (values[0], alpha, d_x),
            Axis::Alpha => (gamma, values[0], d_x),
            Axis::DX => (gamma, alpha, values[0]),
        };
        let base = s.deployment(g0, a0, d0)?;

        let strategies = s
            .list("strategy")
            .iter()
            .map(|x| x.parse())
            .collect::<CliResult<Vec<StrategySpec>>>()?;
        let metrics = s
            .list("metric")
            .iter()
            .map(|x| x.parse())
            .collect::<CliResult<Vec<Metric>>>()?;
        let spec = SweepSpec {
            axis,
            values,
            strategies,
            metrics,
            n_samples: s.u64("samples")?,
            seed: s.u64("seed")?,
            gamma_thr: s.f64("gamma_thr")?,
            base,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.values.is_empty() {
            return Err(CliError::BadInput("sweep range is empty".into()));
        }
        if self.strategies.is_empty() {
            return Err(CliError::BadInput("at least one --strategy is required".into()));
        }
        if self.metrics.is_empty() {
            return Err(CliError::BadInput("at least one --metric is required".into()));
        }
        if !(self.gamma_thr > 0.0 && self.gamma_thr.is_finite()) {
            return Err(CliError::BadInput(format!("gamma_thr must be positive, got {}", self.gamma_thr)));
        }
        if self.n_samples == 0 && self.strategies.iter().any(|s| s.strategy == Strategy::PinchOptimal) {
            return Err(CliError::BadInput(
                "pinch-optimal is only available by Monte Carlo; use --samples > 0".into(),
            ));
        }
        for &v in &self.values {
            self.deployment_at(v, None).validate().map_err(|e| {
                CliError::BadInput(format!("{} = {v}: {e}", self.axis.as_str()))
            })?;
        }
        Ok(())
    }

    fn deployment_at(&self, value: f64, n_antennas: Option<u32>) -> Deployment {
        let mut dep = match self.axis {
            Axis::GammaTDb => self.base.with_gamma_t_db(value),
            Axis::Alpha => self.base.with_alpha(value),
            Axis::DX => self.base.with_d_x(value),
        };
        if let Some(n) = n_antennas {
            dep = dep.with_n_antennas(n);
        }
        dep
    }

    /// Column layout: one non-random column per (strategy, metric) where an
    /// analytic or quadrature route exists, and a value/stderr pair per
    /// Monte Carlo column.
    pub fn columns(&self) -> Vec<Column> {
        let mut cols = Vec::new();
        for s in &self.strategies {
            for &m in &self.metrics {
                let exact = match s.strategy {
                    Strategy::PinchAtUserX => Some(Method::ClosedForm),
                    Strategy::ConventionalFeedPoint => Some(Method::Quadrature),
                    Strategy::PinchOptimal => None,
                };
                if let Some(method) = exact {
                    cols.push(Column { strategy: *s, metric: m, method, stderr: false });
                }
                if self.n_samples > 0 {
                    cols.push(Column { strategy: *s, metric: m, method: Method::MonteCarlo, stderr: false });
                    cols.push(Column { strategy: *s, metric: m, method: Method::MonteCarlo, stderr: true });
                }
            }
        }
        cols
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Column {
    pub strategy: StrategySpec,
    pub metric: Metric,
    pub method: Method,
    pub stderr: bool,
}

impl Column {
    pub fn name(&self) -> String {
        let base = format!("{}.{}.{}", self.strategy, self.metric.as_str(), self.method);
        if self.stderr {
            format!("{base}.stderr")
        } else {
            base
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub axis_value: f64,
    /// Aligned with [`SweepTable::columns`].
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: String,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
}

fn exact_value(dep: &Deployment, gamma_thr: f64, col: &Column) -> pinchperf_core::Result<f64> {
    match (col.strategy.strategy, col.metric) {
        (Strategy::PinchAtUserX, Metric::Outage) => Ok(outage(dep, gamma_thr)?.probability),
        (Strategy::PinchAtUserX, Metric::Rate) => Ok(avg_rate(dep)?.rate),
        (Strategy::ConventionalFeedPoint, Metric::Outage) => Ok(benchmark_outage_quadrature(dep, gamma_thr)?.probability),
        (Strategy::ConventionalFeedPoint, Metric::Rate) => Ok(benchmark_rate_quadrature(dep)?.rate),
        (Strategy::PinchOptimal, _) => unreachable!("no exact column for pinch-optimal"),
    }
}

fn mc_value(dep: &Deployment, spec: &SweepSpec, col: &Column) -> pinchperf_core::Result<McEstimate> {
    match col.metric {
        Metric::Outage => simulate_outage(dep, spec.gamma_thr, col.strategy.strategy, spec.n_samples, spec.seed),
        Metric::Rate => simulate_rate(dep, col.strategy.strategy, spec.n_samples, spec.seed),
    }
}

fn run_row(spec: &SweepSpec, columns: &[Column], value: f64) -> CliResult<ResultRow> {
    let context = format!("{} = {value}", spec.axis.as_str());
    let mut values = Vec::with_capacity(columns.len());
    let mut i = 0;
    while i < columns.len() {
        let col = &columns[i];
        let dep = spec.deployment_at(value, col.strategy.n_antennas);
        if col.method == Method::MonteCarlo {
            let e = mc_value(&dep, spec, col).map_err(|e| CliError::from_core(e, &context))?;
            values.push(e.value);
            values.push(e.std_error);
            i += 2;
        } else {
            values.push(exact_value(&dep, spec.gamma_thr, col).map_err(|e| CliError::from_core(e, &context))?);
            i += 1;
        }
    }
    Ok(ResultRow { axis_value: value, values })
}

/// Rows in ascending axis order. Monte Carlo cells share `spec.seed`, so
/// every row and strategy sees the same users.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<SweepTable> {
    spec.validate()?;
    let columns = spec.columns();
    let rows = spec
        .values
        .par_iter()
        .map(|&v| run_row(spec, &columns, v))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SweepTable {
        axis: spec.axis.as_str().to_string(),
        columns: columns.iter().map(Column::name).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RawMap;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings::default();
        let m: RawMap = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        s.apply(&m, crate::config::Source::CommandLine);
        s
    }

    #[test]
    fn strategy_suffix() {
        let s: StrategySpec = "conventional-feed-point@5".parse().unwrap();
        assert_eq!(s.n_antennas, Some(5));
        assert_eq!(s.to_string(), "conventional-feed-point@5");
        assert!("pinch-optimal@0".parse::<StrategySpec>().is_err());
        assert!("nope".parse::<StrategySpec>().is_err());
    }

    #[test]
    fn default_axis_is_gamma() {
        let spec = SweepSpec::from_settings(&Settings::default()).unwrap();
        assert_eq!(spec.axis, Axis::GammaTDb);
        assert_eq!(spec.values.len(), 26);
    }

    #[test]
    fn alpha_axis_keeps_default_power() {
        let spec = SweepSpec::from_settings(&settings(&[("alpha", "0:0.1:0.05")])).unwrap();
        assert_eq!(spec.axis, Axis::Alpha);
        assert_eq!(spec.values, vec![0.0, 0.05, 0.1]);
        assert!((spec.base.gamma_t_db() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn two_axes_rejected() {
        let r = SweepSpec::from_settings(&settings(&[("gamma_t_db", "90:100:1"), ("d_x", "10:30:10")]));
        assert!(matches!(r, Err(CliError::BadInput(_))));
    }

    #[test]
    fn optimal_needs_samples() {
        let r = SweepSpec::from_settings(&settings(&[("strategy", "pinch-optimal"), ("samples", "0")]));
        assert!(r.is_err());
    }

    #[test]
    fn column_names() {
        let spec = SweepSpec::from_settings(&settings(&[
            ("strategy", "pinch-at-user-x,pinch-optimal@2"),
            ("metric", "outage,rate"),
            ("samples", "1000"),
        ]))
        .unwrap();
        let names: Vec<String> = spec.columns().iter().map(Column::name).collect();
        assert_eq!(
            names,
            [
                "pinch-at-user-x.outage.closed-form",
                "pinch-at-user-x.outage.monte-carlo",
                "pinch-at-user-x.outage.monte-carlo.stderr",
                "pinch-at-user-x.rate.closed-form",
                "pinch-at-user-x.rate.monte-carlo",
                "pinch-at-user-x.rate.monte-carlo.stderr",
                "pinch-optimal@2.outage.monte-carlo",
                "pinch-optimal@2.outage.monte-carlo.stderr",
                "pinch-optimal@2.rate.monte-carlo",
                "pinch-optimal@2.rate.monte-carlo.stderr",
            ]
        );
    }

    #[test]
    fn rows_fill_every_column() {
        let spec = SweepSpec::from_settings(&settings(&[
            ("gamma_t_db", "95:97:1"),
            ("metric", "outage,rate"),
            ("samples", "2000"),
        ]))
        .unwrap();
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 3);
        for r in &t.rows {
            assert_eq!(r.values.len(), t.columns.len());
            assert!(r.values.iter().all(|v| v.is_finite()));
        }
        assert!(t.rows.windows(2).all(|w| w[0].axis_value < w[1].axis_value));
    }
}
