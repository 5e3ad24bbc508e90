//! Extra transmit power needed when the region grows from one length to
//! another, at a fixed outage target.

use std::io::Write;

use serde::Serialize;

use pinchperf_core::oracles::{find_power_for_outage, PowerSearch};
use pinchperf_core::Deployment;

use crate::error::{CliError, CliResult};
use crate::output::format_value;
use crate::sweep::StrategySpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerGapRow {
    pub strategy: String,
    pub target: f64,
    pub d_x_near: f64,
    pub d_x_far: f64,
    pub gamma_t_db_near: f64,
    pub gamma_t_db_far: f64,
    pub gap_db: f64,
}

pub fn run_power_gap(
    base: &Deployment,
    gamma_thr: f64,
    target: f64,
    strategies: &[StrategySpec],
    (d_x_near, d_x_far): (f64, f64),
    search: &PowerSearch,
) -> CliResult<Vec<PowerGapRow>> {
    if strategies.is_empty() {
        return Err(CliError::BadInput("at least one --strategy is required".into()));
    }
    strategies
        .iter()
        .map(|s| {
            let mut dep = *base;
            if let Some(n) = s.n_antennas {
                dep = dep.with_n_antennas(n);
            }
            let solve = |d_x: f64| {
                find_power_for_outage(&dep.with_d_x(d_x), gamma_thr, target, s.strategy, search)
                    .map_err(|e| CliError::from_core(e, &format!("{s} at d_x = {d_x}")))
            };
            let near = solve(d_x_near)?;
            let far = solve(d_x_far)?;
            Ok(PowerGapRow {
                strategy: s.to_string(),
                target,
                d_x_near,
                d_x_far,
                gamma_t_db_near: near.gamma_t_db,
                gamma_t_db_far: far.gamma_t_db,
                gap_db: far.gamma_t_db - near.gamma_t_db,
            })
        })
        .collect()
}

pub fn write_power_gap_csv<W: Write>(rows: &[PowerGapRow], out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["strategy", "target", "d_x_near", "d_x_far", "gamma_t_db_near", "gamma_t_db_far", "gap_db"])?;
    for r in rows {
        w.write_record([
            r.strategy.clone(),
            format_value(r.target),
            format_value(r.d_x_near),
            format_value(r.d_x_far),
            format_value(r.gamma_t_db_near),
            format_value(r.gamma_t_db_far),
            format_value(r.gap_db),
        ])?;
    }
    w.flush()?;
    Ok(())
}
