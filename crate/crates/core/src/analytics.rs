//! Closed-form outage probability and average rate for the antenna pinched
//! at the user's x-coordinate, `x_p = x_m`.
//!
//! With `x_p = x_m` the SNR is `A e^{-α x_m} / (y_m² + h²)`, so an outage
//! happens exactly when `y_m² >= C e^{-α x_m} - h²`. The lossy outage
//! splits into six regions depending on where the coverage boundary
//! `y_m = ±sqrt(C e^{-α x} - h²)` meets the edges of the floor; the lossless
//! case has three.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{derive_constants, Deployment};
use crate::oracles::integrals;
use crate::specfun::{dilog, z_kernel_with_gap};

/// Radicands within this distance below zero are treated as zero.
const RADICAND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    MonteCarlo,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::MonteCarlo => "monte-carlo",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which region of the outage expression produced a value.
///
/// "Width" refers to whether the covered y-interval reaches the full strip
/// width `D_y` near the feed point; "reach" to whether coverage extends to
/// the far end `x = D_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutageBranch {
    /// `h² >= C`: no user is covered.
    Uncovered,
    /// Coverage narrower than the strip and ending before `D_x`.
    PartialWidthShortReach,
    /// Full width near the feed, coverage ending before `D_x`.
    FullWidthShortReach,
    /// Narrower than the strip, reaching `D_x`.
    PartialWidthFullReach,
    /// Full width near the feed, partial at `D_x`.
    FullWidthFullReach,
    /// `h² <= C e^{-α D_x} - D_y²/4`: every user is covered.
    Covered,
    LosslessUncovered,
    LosslessPartial,
    LosslessCovered,
}

impl OutageBranch {
    pub const LOSSY: [OutageBranch; 6] = [
        OutageBranch::Uncovered,
        OutageBranch::PartialWidthShortReach,
        OutageBranch::FullWidthShortReach,
        OutageBranch::PartialWidthFullReach,
        OutageBranch::FullWidthFullReach,
        OutageBranch::Covered,
    ];

    /// 1-based row within its table (six lossy rows, three lossless rows).
    pub fn row(&self) -> usize {
        match self {
            OutageBranch::Uncovered | OutageBranch::LosslessUncovered => 1,
            OutageBranch::PartialWidthShortReach | OutageBranch::LosslessPartial => 2,
            OutageBranch::FullWidthShortReach | OutageBranch::LosslessCovered => 3,
            OutageBranch::PartialWidthFullReach => 4,
            OutageBranch::FullWidthFullReach => 5,
            OutageBranch::Covered => 6,
        }
    }

    pub fn is_lossless(&self) -> bool {
        matches!(
            self,
            OutageBranch::LosslessUncovered | OutageBranch::LosslessPartial | OutageBranch::LosslessCovered
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            OutageBranch::Uncovered => "uncovered",
            OutageBranch::PartialWidthShortReach => "partial-width-short-reach",
            OutageBranch::FullWidthShortReach => "full-width-short-reach",
            OutageBranch::PartialWidthFullReach => "partial-width-full-reach",
            OutageBranch::FullWidthFullReach => "full-width-full-reach",
            OutageBranch::Covered => "covered",
            OutageBranch::LosslessUncovered => "lossless-uncovered",
            OutageBranch::LosslessPartial => "lossless-partial",
            OutageBranch::LosslessCovered => "lossless-covered",
        }
    }
}

impl fmt::Display for OutageBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub probability: f64,
    /// Closed-form region; `None` for numerical oracles.
    pub branch: Option<OutageBranch>,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    /// Bits/s/Hz.
    pub rate: f64,
    pub method: Method,
}

fn clamped_sqrt(radicand: f64) -> f64 {
    if (-RADICAND_SLACK..0.0).contains(&radicand) {
        0.0
    } else {
        radicand.max(0.0).sqrt()
    }
}

/// Unclamped six-region lossy outage. Rows are tried top to bottom and the
/// first satisfied condition wins; neighbouring expressions agree on the
/// shared boundaries.
pub(crate) fn lossy_outage_table(c: f64, alpha: f64, d_x: f64, d_y: f64, h: f64) -> (f64, OutageBranch) {
    let h2 = h * h;
    let quarter_dy2 = 0.25 * d_y * d_y;
    let c_far = c * (-alpha * d_x).exp();
    let width_limit = c - quarter_dy2;
    let far_width_limit = c_far - quarter_dy2;
    let alpha_dx = alpha * d_x;
    let scale = 4.0 / (alpha_dx * d_y);
    let arc = |u: f64| h * (u / h).atan();

    if h2 >= c {
        (1.0, OutageBranch::Uncovered)
    } else if h2 >= width_limit && h2 >= c_far {
        let u_feed = clamped_sqrt(c - h2);
        (1.0 + scale * (arc(u_feed) - u_feed), OutageBranch::PartialWidthShortReach)
    } else if h2 <= width_limit && h2 >= c_far {
        let log_term = ((h2 + quarter_dy2) / c).ln();
        let p = 1.0 + (log_term - 2.0) / alpha_dx + scale * h * (0.5 * d_y / h).atan();
        (p, OutageBranch::FullWidthShortReach)
    } else if h2 >= width_limit && h2 <= c_far {
        let u_far = clamped_sqrt(c_far - h2);
        let u_feed = clamped_sqrt(c - h2);
        let p = 1.0 + scale * (u_far - arc(u_far) - u_feed + arc(u_feed));
        (p, OutageBranch::PartialWidthFullReach)
    } else if h2 >= far_width_limit {
        let u_far = clamped_sqrt(c_far - h2);
        let log_term = ((h2 + quarter_dy2) / c).ln();
        let p = 1.0 + scale * (u_far - arc(u_far) - 0.5 * d_y + arc(0.5 * d_y)) + log_term / alpha_dx;
        (p, OutageBranch::FullWidthFullReach)
    } else {
        (0.0, OutageBranch::Covered)
    }
}

/// Three-region lossless outage.
pub(crate) fn lossless_outage_table(c: f64, d_y: f64, h: f64) -> (f64, OutageBranch) {
    let h2 = h * h;
    if h2 >= c {
        (1.0, OutageBranch::LosslessUncovered)
    } else if c <= h2 + 0.25 * d_y * d_y {
        (1.0 - 2.0 / d_y * clamped_sqrt(c - h2), OutageBranch::LosslessPartial)
    } else {
        (0.0, OutageBranch::LosslessCovered)
    }
}

/// Closed-form outage on a lossy waveguide (`alpha > 0`).
pub fn outage_lossy(dep: &Deployment, gamma_thr: f64) -> Result<OutageResult> {
    let k = derive_constants(dep, gamma_thr)?;
    if dep.alpha == 0.0 {
        return Err(Error::InvalidParameter(
            "lossy outage needs alpha > 0; use outage_lossless for alpha = 0".into(),
        ));
    }
    let (p, branch) = lossy_outage_table(k.c_const, dep.alpha, dep.d_x, dep.d_y, dep.h);
    Ok(OutageResult {
        probability: p.clamp(0.0, 1.0),
        branch: Some(branch),
        method: Method::ClosedForm,
    })
}

/// Closed-form outage on a lossless waveguide; `alpha` is ignored.
pub fn outage_lossless(dep: &Deployment, gamma_thr: f64) -> Result<OutageResult> {
    let k = derive_constants(dep, gamma_thr)?;
    let (p, branch) = lossless_outage_table(k.c_const, dep.d_y, dep.h);
    Ok(OutageResult {
        probability: p.clamp(0.0, 1.0),
        branch: Some(branch),
        method: Method::ClosedForm,
    })
}

/// Lossy or lossless closed form depending on `dep.alpha`.
pub fn outage(dep: &Deployment, gamma_thr: f64) -> Result<OutageResult> {
    if dep.alpha == 0.0 {
        outage_lossless(dep, gamma_thr)
    } else {
        outage_lossy(dep, gamma_thr)
    }
}

/// Antiderivative bracket of the `I_B` integral, evaluated at
/// `omega = sqrt(a + h²)`. `a` is passed so that `omega - h = a / (omega + h)`
/// is formed without cancellation.
fn rate_bracket(omega: f64, a: f64, h: f64, d_y: f64) -> f64 {
    let gap_minus = a / (omega + h);
    let gap_plus = omega + h;
    let angle = (0.5 * d_y / omega).atan();
    let log_term = 0.25 * d_y * (0.25 * d_y * d_y + omega * omega).ln();
    let arc_term = omega * angle;
    let ratio_term = 0.5 * h * angle * (gap_minus.ln() - gap_plus.ln());
    let z_term = 0.25
        * h
        * (z_kernel_with_gap(omega, h, gap_minus, d_y) - z_kernel_with_gap(omega, -h, gap_plus, d_y));
    log_term + arc_term + ratio_term + z_term
}

/// Closed-form average rate on a lossy waveguide (`alpha > 0`).
pub fn avg_rate_lossy(dep: &Deployment) -> Result<RateResult> {
    dep.validate()?;
    if dep.alpha == 0.0 {
        return Err(Error::InvalidParameter(
            "lossy rate needs alpha > 0; use avg_rate_lossless_numeric for alpha = 0".into(),
        ));
    }
    let Deployment { d_x, d_y, h, alpha, .. } = *dep;
    let a = dep.snr_scale();
    if a == 0.0 {
        return Ok(RateResult {
            rate: 0.0,
            method: Method::ClosedForm,
        });
    }
    let q = h * h + 0.25 * d_y * d_y;
    let a_far = a * (-alpha * d_x).exp();

    let dilog_term = d_y / (alpha * LN_2) * (dilog(-a_far / q)? - dilog(-a / q)?);
    let arctan_term = 4.0 * h * d_x / LN_2 * (0.5 * d_y / h).atan();
    let upper = rate_bracket((a_far + h * h).sqrt(), a_far, h, d_y);
    let lower = rate_bracket((a + h * h).sqrt(), a, h, d_y);
    let bracket_term = 8.0 / (alpha * LN_2) * (upper - lower);

    let rate = (dilog_term - arctan_term - bracket_term) / (d_x * d_y);
    Ok(RateResult {
        rate: rate.max(0.0),
        method: Method::ClosedForm,
    })
}

/// Lossless average rate by 2D adaptive quadrature.
pub fn avg_rate_lossless_numeric(dep: &Deployment) -> Result<RateResult> {
    let lossless = dep.with_alpha(0.0);
    let r = integrals::rate_quadrature_with(&lossless, 1e-10)?;
    Ok(RateResult {
        rate: r.rate,
        method: Method::Quadrature,
    })
}

/// Lossy closed form, or the lossless quadrature for `alpha == 0`.
pub fn avg_rate(dep: &Deployment) -> Result<RateResult> {
    if dep.alpha == 0.0 {
        avg_rate_lossless_numeric(dep)
    } else {
        avg_rate_lossy(dep)
    }
}
