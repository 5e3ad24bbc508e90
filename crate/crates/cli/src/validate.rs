//! Closed forms against their quadrature oracles over a parameter grid.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use pinchperf_core::analytics::{avg_rate_lossy, outage};
use pinchperf_core::oracles::{outage_quadrature, rate_quadrature};
use pinchperf_core::{Deployment, OutageBranch};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationGrid {
    pub outage_gamma_t_db: Vec<f64>,
    pub outage_alpha: Vec<f64>,
    pub rate_gamma_t_db: Vec<f64>,
    pub rate_alpha: Vec<f64>,
    pub d_x: Vec<f64>,
    pub gamma_thr: f64,
    /// Absolute outage tolerance.
    pub outage_tolerance: f64,
    /// Relative rate tolerance.
    pub rate_tolerance: f64,
}

impl Default for ValidationGrid {
    fn default() -> Self {
        Self {
            outage_gamma_t_db: (0..50).map(|i| 90.0 + 25.0 * i as f64 / 49.0).collect(),
            outage_alpha: vec![0.0, 0.001, 0.01, 0.05, 0.1],
            rate_gamma_t_db: vec![80.0, 90.0, 100.0, 110.0],
            rate_alpha: vec![0.01, 0.05, 0.1],
            d_x: vec![10.0, 30.0],
            gamma_thr: 100.0,
            outage_tolerance: 1e-9,
            rate_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub gamma_t_db: f64,
    pub alpha: f64,
    pub d_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Worst {
    pub points: usize,
    pub max_delta: f64,
    pub at: Option<GridPoint>,
}

impl Worst {
    fn new() -> Self {
        Self { points: 0, max_delta: 0.0, at: None }
    }

    fn record(&mut self, delta: f64, at: GridPoint) {
        self.points += 1;
        if delta > self.max_delta || self.at.is_none() || delta.is_nan() {
            self.max_delta = delta;
            self.at = Some(at);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// Worst absolute outage delta per closed-form region.
    pub outage: BTreeMap<OutageBranch, Worst>,
    /// Worst relative rate delta.
    pub rate: Worst,
    pub outage_tolerance: f64,
    pub rate_tolerance: f64,
}

impl ValidationReport {
    pub fn max_outage_delta(&self) -> f64 {
        self.outage.values().map(|w| w.max_delta).fold(0.0, f64::max)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for (branch, w) in &self.outage {
            if w.max_delta.is_nan() || w.max_delta > self.outage_tolerance {
                v.push(format!(
                    "outage region {branch}: delta {:.3e} > {:.3e} at {}",
                    w.max_delta,
                    self.outage_tolerance,
                    describe(w.at)
                ));
            }
        }
        if self.rate.max_delta.is_nan() || self.rate.max_delta > self.rate_tolerance {
            v.push(format!(
                "rate: relative delta {:.3e} > {:.3e} at {}",
                self.rate.max_delta,
                self.rate_tolerance,
                describe(self.rate.at)
            ));
        }
        v
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "outage: closed form vs quadrature (abs tolerance {:.1e})", self.outage_tolerance);
        for (branch, w) in &self.outage {
            let _ = writeln!(
                s,
                "  {:<28} points {:>4}  max |delta| {:.3e}  at {}",
                branch.to_string(),
                w.points,
                w.max_delta,
                describe(w.at)
            );
        }
        let _ = writeln!(s, "rate: closed form vs 2D quadrature (rel tolerance {:.1e})", self.rate_tolerance);
        let _ = writeln!(
            s,
            "  points {:>4}  max rel delta {:.3e}  at {}",
            self.rate.points,
            self.rate.max_delta,
            describe(self.rate.at)
        );
        let _ = writeln!(s, "{}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

fn describe(p: Option<GridPoint>) -> String {
    match p {
        Some(p) => format!("(gamma_t_db={}, alpha={}, d_x={})", p.gamma_t_db, p.alpha, p.d_x),
        None => "-".into(),
    }
}

pub fn run_validate(base: &Deployment, grid: &ValidationGrid) -> CliResult<ValidationReport> {
    let mut outage_worst: BTreeMap<OutageBranch, Worst> = BTreeMap::new();
    for &d_x in &grid.d_x {
        for &alpha in &grid.outage_alpha {
            for &g in &grid.outage_gamma_t_db {
                let at = GridPoint { gamma_t_db: g, alpha, d_x };
                let dep = base.with_gamma_t_db(g).with_alpha(alpha).with_d_x(d_x);
                let ctx = describe(Some(at));
                let cf = outage(&dep, grid.gamma_thr).map_err(|e| CliError::from_core(e, &ctx))?;
                let q = outage_quadrature(&dep, grid.gamma_thr).map_err(|e| CliError::from_core(e, &ctx))?;
                let branch = cf.branch.expect("closed form reports its region");
                outage_worst
                    .entry(branch)
                    .or_insert_with(Worst::new)
                    .record((cf.probability - q.probability).abs(), at);
            }
        }
    }
    let mut rate = Worst::new();
    for &d_x in &grid.d_x {
        for &alpha in &grid.rate_alpha {
            for &g in &grid.rate_gamma_t_db {
                let at = GridPoint { gamma_t_db: g, alpha, d_x };
                let dep = base.with_gamma_t_db(g).with_alpha(alpha).with_d_x(d_x);
                let ctx = describe(Some(at));
                let cf = avg_rate_lossy(&dep).map_err(|e| CliError::from_core(e, &ctx))?.rate;
                let q = rate_quadrature(&dep).map_err(|e| CliError::from_core(e, &ctx))?.rate;
                rate.record(((cf - q) / q).abs(), at);
            }
        }
    }
    Ok(ValidationReport {
        outage: outage_worst,
        rate,
        outage_tolerance: grid.outage_tolerance,
        rate_tolerance: grid.rate_tolerance,
    })
}
