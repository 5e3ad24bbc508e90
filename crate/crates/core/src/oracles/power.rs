//! Transmit power (as γ_t in dB) needed to reach a target outage.

use serde::{Deserialize, Serialize};

use crate::analytics::outage;
use crate::error::{Error, Result};
use crate::model::Deployment;
use crate::oracles::integrals::benchmark_outage_quadrature;
use crate::oracles::monte_carlo::{simulate_outage, Strategy};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSearch {
    pub lower_db: f64,
    pub upper_db: f64,
    /// Stop once `|P - target| <= rel_tolerance * target`.
    pub rel_tolerance: f64,
    pub max_iterations: u32,
    /// Monte Carlo budget for strategies without a closed form.
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for PowerSearch {
    fn default() -> Self {
        Self {
            lower_db: 60.0,
            upper_db: 140.0,
            rel_tolerance: 0.05,
            max_iterations: 200,
            mc_samples: 1_000_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRequirement {
    pub gamma_t_db: f64,
    pub outage: f64,
    pub iterations: u32,
}

/// Outage at `dep` for `strategy`: closed form for the pinched-at-x antenna,
/// quadrature for the conventional antenna, Monte Carlo for the optimal
/// placement (same seed at every power, so the curve is monotone).
pub fn strategy_outage(dep: &Deployment, gamma_thr: f64, strategy: Strategy, search: &PowerSearch) -> Result<f64> {
    match strategy {
        Strategy::PinchAtUserX => Ok(outage(dep, gamma_thr)?.probability),
        Strategy::ConventionalFeedPoint => Ok(benchmark_outage_quadrature(dep, gamma_thr)?.probability),
        Strategy::PinchOptimal => Ok(simulate_outage(dep, gamma_thr, strategy, search.mc_samples, search.seed)?.value),
    }
}

/// Bisection on γ_t (dB) for `P_out(γ_t) = target`.
pub fn find_power_for_outage(
    dep: &Deployment,
    gamma_thr: f64,
    target: f64,
    strategy: Strategy,
    search: &PowerSearch,
) -> Result<PowerRequirement> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target outage must lie in (0, 1), got {target}")));
    }
    let eval = |db: f64| strategy_outage(&dep.with_gamma_t_db(db), gamma_thr, strategy, search);
    let (mut lo, mut hi) = (search.lower_db, search.upper_db);
    let p_lo = eval(lo)?;
    let p_hi = eval(hi)?;
    if p_lo <= target || p_hi > target {
        return Err(Error::BracketNotFound {
            target,
            lower_db: lo,
            upper_db: hi,
            p_lower: p_lo,
            p_upper: p_hi,
        });
    }
    let mut best = (hi, p_hi);
    for it in 1..=search.max_iterations {
        let mid = 0.5 * (lo + hi);
        let p = eval(mid)?;
        if (p - target).abs() <= search.rel_tolerance * target {
            return Ok(PowerRequirement {
                gamma_t_db: mid,
                outage: p,
                iterations: it,
            });
        }
        if p > target {
            lo = mid;
        } else {
            hi = mid;
            best = (mid, p);
        }
        if hi - lo <= 1e-10 {
            // Step-shaped estimates (Monte Carlo) may jump over the band.
            return Ok(PowerRequirement {
                gamma_t_db: best.0,
                outage: best.1,
                iterations: it,
            });
        }
    }
    Ok(PowerRequirement {
        gamma_t_db: best.0,
        outage: best.1,
        iterations: search.max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_target_is_met() {
        let dep = Deployment::default();
        let s = PowerSearch::default();
        let r = find_power_for_outage(&dep, 100.0, 1e-3, Strategy::PinchAtUserX, &s).unwrap();
        assert!((r.outage - 1e-3).abs() <= 0.05e-3);
        let again = outage(&dep.with_gamma_t_db(r.gamma_t_db), 100.0).unwrap().probability;
        assert_eq!(again, r.outage);
    }

    #[test]
    fn unbracketed_target() {
        let dep = Deployment::default();
        let s = PowerSearch {
            lower_db: 120.0,
            ..PowerSearch::default()
        };
        let r = find_power_for_outage(&dep, 100.0, 1e-3, Strategy::PinchAtUserX, &s);
        assert!(matches!(r, Err(Error::BracketNotFound { .. })));
        assert!(find_power_for_outage(&dep, 100.0, 1.5, Strategy::PinchAtUserX, &s).is_err());
    }

    #[test]
    fn benchmark_needs_more_power() {
        let dep = Deployment::default();
        let s = PowerSearch::default();
        let pas = find_power_for_outage(&dep, 100.0, 1e-2, Strategy::PinchAtUserX, &s).unwrap();
        let conv = find_power_for_outage(&dep, 100.0, 1e-2, Strategy::ConventionalFeedPoint, &s).unwrap();
        assert!(conv.gamma_t_db > pas.gamma_t_db);
    }
}
