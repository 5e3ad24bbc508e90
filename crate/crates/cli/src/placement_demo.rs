use std::fmt::Write as _;

use serde::Serialize;

use pinchperf_core::placement::{near_root_offset, optimal_position, placement_gain, DOUBLE_ROOT_TOLERANCE};
use pinchperf_core::{Deployment, PlacementBranch, UserPosition};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementReport {
    pub x_m: f64,
    pub y_m: f64,
    pub alpha: f64,
    pub branch: PlacementBranch,
    pub x_star: f64,
    pub discriminant: f64,
    pub gain: f64,
    pub gain_db: f64,
    /// `|x_star - x_m|`.
    pub offset: f64,
    /// `(1 - sqrt(1 - α²(y_m² + h²))) / α`, absent for complex roots or
    /// `α = 0`.
    pub near_root_bound: Option<f64>,
    /// `offset - near_root_bound` when positive.
    pub bound_excess: Option<f64>,
}

pub fn run_placement_demo(dep: &Deployment, x_m: f64, y_m: f64) -> CliResult<PlacementReport> {
    let user = UserPosition::new(dep, x_m, y_m).map_err(|e| CliError::BadInput(e.to_string()))?;
    let sol = optimal_position(dep, &user);
    let gain = placement_gain(dep, &user);
    let s = y_m * y_m + dep.h * dep.h;
    let bound = if dep.alpha > 0.0 && sol.discriminant > DOUBLE_ROOT_TOLERANCE {
        near_root_offset(dep.alpha, s)
    } else {
        None
    };
    let offset = (sol.x_star - x_m).abs();
    Ok(PlacementReport {
        x_m,
        y_m,
        alpha: dep.alpha,
        branch: sol.branch,
        x_star: sol.x_star,
        discriminant: sol.discriminant,
        gain,
        gain_db: 10.0 * gain.log10(),
        offset,
        near_root_bound: bound,
        bound_excess: bound.map(|b| offset - b).filter(|&e| e > 0.0),
    })
}

impl PlacementReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "user            ({}, {})", self.x_m, self.y_m);
        let _ = writeln!(s, "alpha           {}", self.alpha);
        let _ = writeln!(s, "branch          {}", self.branch);
        let _ = writeln!(s, "x_star          {:.12}", self.x_star);
        let _ = writeln!(s, "x_m - x_star    {:.12}", self.x_m - self.x_star);
        let _ = writeln!(s, "discriminant    {:.12}", self.discriminant);
        let _ = writeln!(s, "gain            {:.12} ({:.6} dB)", self.gain, self.gain_db);
        match self.near_root_bound {
            Some(b) => {
                let _ = writeln!(s, "near-root bound {b:.12}");
            }
            None => {
                let _ = writeln!(s, "near-root bound -");
            }
        }
        if let Some(e) = self.bound_excess {
            let _ = writeln!(s, "bound exceeded  by {e:.12}");
        }
        s
    }
}
