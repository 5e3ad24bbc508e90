//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs, rel * |I|)`. Known derivative kinks can be passed
//! as breakpoints so that no panel straddles them.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Maximum bisection depth of any panel.
pub const MAX_LEVELS: u32 = 60;

/// Upper bound on live panels before giving up.
const MAX_PANELS: usize = 50_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights at the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
    level: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lower: f64, upper: f64, level: u32) -> Panel {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        lower,
        upper,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        level,
    }
}

/// Compensated sum; panel totals must not drift while thousands of
/// bisections are accumulated.
fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    integrate_with_breakpoints(f, &[a, b], tol)
}

/// Integrates `f` over `[points[0], points[last]]`, starting with one panel
/// per consecutive pair of `points`. Breakpoints must be non-decreasing;
/// zero-width pieces are dropped.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Integral> {
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs at least two finite limits, got {points:?}"
        )));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(format!(
            "quadrature breakpoints must be non-decreasing, got {points:?}"
        )));
    }
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gauss_kronrod(&f, w[0], w[1], 0));
        }
    }
    let mut evaluations = 15 * heap.len();
    loop {
        let value = neumaier_sum(heap.iter().map(|p| p.value));
        let error = neumaier_sum(heap.iter().map(|p| p.error));
        if error <= tol.target(value) {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => unreachable!("non-converged quadrature with no panels"),
        };
        let mid = 0.5 * (worst.lower + worst.upper);
        if worst.level >= MAX_LEVELS || heap.len() >= MAX_PANELS || mid <= worst.lower || mid >= worst.upper {
            let error = error.max(worst.error);
            return Err(Error::Convergence {
                lower: points[0],
                upper: points[points.len() - 1],
                error,
                tolerance: tol.target(value),
            });
        }
        heap.push(gauss_kronrod(&f, worst.lower, mid, worst.level + 1));
        heap.push(gauss_kronrod(&f, mid, worst.upper, worst.level + 1));
        evaluations += 30;
    }
}
