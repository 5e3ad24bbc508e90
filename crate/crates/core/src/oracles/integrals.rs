//! Direct numerical integration of the outage and rate definitions.
//!
//! Users are uniform on the floor, so both metrics are plain averages over
//! `[0, D_x] x [-D_y/2, D_y/2]`. For outage the y-integral is analytic (the
//! covered y-interval has a closed-form width), leaving a 1D integral in `x`
//! with kinks wherever that width saturates or vanishes.

use std::f64::consts::LN_2;

use crate::analytics::{Method, OutageResult, RateResult};
use crate::error::Result;
use crate::model::{derive_constants, Deployment, REFERENCE_DISTANCE};
use crate::oracles::quadrature::{integrate, integrate_with_breakpoints, Tolerance};

/// Absolute tolerance of the 1D outage integrals.
pub const OUTAGE_TOLERANCE: f64 = 1e-12;

/// Relative tolerance of the 2D rate integrals.
pub const RATE_TOLERANCE: f64 = 1e-9;

fn interior_breakpoints(lower: f64, upper: f64, candidates: &[f64]) -> Vec<f64> {
    let mut pts = vec![lower];
    let mut inner: Vec<f64> = candidates
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > lower && *p < upper)
        .collect();
    inner.sort_by(f64::total_cmp);
    pts.extend(inner);
    pts.push(upper);
    pts
}

/// Outage fraction of a y-strip of width `d_y` whose covered half-width is
/// `sqrt(radicand)`.
fn strip_outage(radicand: f64, d_y: f64) -> f64 {
    let half = 0.5 * d_y;
    1.0 - radicand.max(0.0).sqrt().min(half) / half
}

/// Outage with the antenna at `x_p = x_m`, as a 1D integral over `x`.
pub fn pinch_outage_integral(c: f64, alpha: f64, d_x: f64, d_y: f64, h: f64) -> Result<f64> {
    let h2 = h * h;
    let half2 = 0.25 * d_y * d_y;
    let g = |x: f64| strip_outage(c * (-alpha * x).exp() - h2, d_y);
    let pts = if alpha > 0.0 {
        interior_breakpoints(0.0, d_x, &[(c / h2).ln() / alpha, (c / (h2 + half2)).ln() / alpha])
    } else {
        vec![0.0, d_x]
    };
    let r = integrate_with_breakpoints(g, &pts, Tolerance::absolute(OUTAGE_TOLERANCE * d_x))?;
    Ok((r.value / d_x).clamp(0.0, 1.0))
}

pub fn outage_quadrature(dep: &Deployment, gamma_thr: f64) -> Result<OutageResult> {
    let k = derive_constants(dep, gamma_thr)?;
    let p = pinch_outage_integral(k.c_const, dep.alpha, dep.d_x, dep.d_y, dep.h)?;
    Ok(OutageResult {
        probability: p,
        branch: None,
        method: Method::Quadrature,
    })
}

/// Outage of a single ground-level antenna at the origin.
pub fn benchmark_outage_quadrature(dep: &Deployment, gamma_thr: f64) -> Result<OutageResult> {
    let k = derive_constants(dep, gamma_thr)?;
    let c = k.c_const;
    let r0 = REFERENCE_DISTANCE * REFERENCE_DISTANCE;
    // Inside the clamp disc the SNR is A, so C <= r0² means everyone fails.
    let probability = if c <= r0 {
        1.0
    } else {
        let d_x = dep.d_x;
        let d_y = dep.d_y;
        let half2 = 0.25 * d_y * d_y;
        // Points with x² + y² < r0 are clamped but still covered since C > r0.
        let g = |x: f64| strip_outage(c - x * x, d_y);
        let pts = interior_breakpoints(0.0, d_x, &[(c - half2).max(0.0).sqrt(), c.sqrt()]);
        let r = integrate_with_breakpoints(g, &pts, Tolerance::absolute(OUTAGE_TOLERANCE * d_x))?;
        (r.value / d_x).clamp(0.0, 1.0)
    };
    Ok(OutageResult {
        probability,
        branch: None,
        method: Method::Quadrature,
    })
}

/// Rate with the antenna at `x_p = x_m`, relative tolerance `rel`.
pub fn rate_quadrature_with(dep: &Deployment, rel: f64) -> Result<RateResult> {
    dep.validate()?;
    let a = dep.snr_scale();
    let Deployment { d_x, d_y, h, alpha, .. } = *dep;
    let h2 = h * h;
    let inner_tol = Tolerance::relative(0.01 * rel);
    let inner = |x: f64| -> Result<f64> {
        let ax = a * (-alpha * x).exp();
        integrate(|y: f64| (ax / (y * y + h2)).ln_1p(), 0.0, 0.5 * d_y, inner_tol).map(|r| r.value)
    };
    let outer = integrate_fallible(inner, &[0.0, d_x], Tolerance::relative(rel))?;
    Ok(RateResult {
        rate: 2.0 * outer / (d_x * d_y * LN_2),
        method: Method::Quadrature,
    })
}

pub fn rate_quadrature(dep: &Deployment) -> Result<RateResult> {
    rate_quadrature_with(dep, RATE_TOLERANCE)
}

/// Rate of a single ground-level antenna at the origin, distance clamped
/// at the reference distance.
pub fn benchmark_rate_quadrature(dep: &Deployment) -> Result<RateResult> {
    dep.validate()?;
    let a = dep.snr_scale();
    let Deployment { d_x, d_y, .. } = *dep;
    let r0 = REFERENCE_DISTANCE;
    let inner_tol = Tolerance::relative(0.01 * RATE_TOLERANCE);
    let inner = |x: f64| -> Result<f64> {
        let x2 = x * x;
        let f = |y: f64| (a / (x2 + y * y).max(r0 * r0)).ln_1p();
        let half = 0.5 * d_y;
        let pts = if x < r0 {
            interior_breakpoints(0.0, half, &[(r0 * r0 - x2).sqrt()])
        } else {
            vec![0.0, half]
        };
        integrate_with_breakpoints(f, &pts, inner_tol).map(|r| r.value)
    };
    let pts = interior_breakpoints(0.0, d_x, &[r0]);
    let outer = integrate_fallible(inner, &pts, Tolerance::relative(RATE_TOLERANCE))?;
    Ok(RateResult {
        rate: 2.0 * outer / (d_x * d_y * LN_2),
        method: Method::Quadrature,
    })
}

/// Outer integral whose integrand is itself a quadrature that may fail; the
/// first inner failure is propagated.
fn integrate_fallible<F: Fn(f64) -> Result<f64>>(f: F, points: &[f64], tol: Tolerance) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let r = integrate_with_breakpoints(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        points,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}
