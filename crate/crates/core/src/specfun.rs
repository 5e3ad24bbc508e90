//! Dilogarithm kernels for the average-rate closed form.
//!
//! Only what the rate expression needs is exposed: the real dilogarithm on
//! `(-inf, 1]`, the imaginary part of the complex dilogarithm off the branch
//! cut, and the `z(x, y)` kernel that combines them.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex argument type used by [`im_dilog`].
pub type ComplexValue = Complex64;

const PI2_6: f64 = PI * PI / 6.0;

/// `B_{2k} / (2k+1)!` for k = 1..=15, the odd-power coefficients of
/// `Li2(z) = Σ B_n u^{n+1} / (n+1)!` with `u = -ln(1 - z)`.
const BERNOULLI_COEFFS: [f64; 15] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
];

/// Taylor series `Σ x^k / k²`, used only for `|x| <= 0.5`.
fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..=80 {
        power *= x;
        let term = power / (k * k) as f64;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    sum
}

/// Real dilogarithm `Li2(x) = -∫₀ˣ ln(1-u)/u du` for `x <= 1`.
///
/// The argument is mapped into `|x| <= 0.5` with the reflection
/// `x -> 1 - x`, the Landen identity `x -> x/(x-1)` and the inversion
/// `x -> 1/x`, then summed as a power series.
pub fn dilog(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 || x == f64::NEG_INFINITY {
        return Err(Error::Domain {
            function: "dilog",
            argument: format!("{x}"),
        });
    }
    Ok(dilog_unchecked(x))
}

fn dilog_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        PI2_6
    } else if x > 0.5 {
        PI2_6 - x.ln() * (-x).ln_1p() - dilog_series(1.0 - x)
    } else if x >= -0.5 {
        dilog_series(x)
    } else if x >= -2.0 {
        // Landen: Li2(x) = -Li2(x/(x-1)) - ln²(1-x)/2, with x/(x-1) in (1/3, 2/3].
        let y = x / (x - 1.0);
        let log_1mx = (-x).ln_1p();
        let li_y = if y > 0.5 {
            PI2_6 - y.ln() * (1.0 - y).ln() - dilog_series(1.0 - y)
        } else {
            dilog_series(y)
        };
        -li_y - 0.5 * log_1mx * log_1mx
    } else {
        let log_mx = (-x).ln();
        -PI2_6 - 0.5 * log_mx * log_mx - dilog_series(1.0 / x)
    }
}

/// Bernoulli series in `u = -ln(1 - z)`; converges for `|u| < 2π`.
fn bernoulli_series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut tail = Complex64::new(0.0, 0.0);
    for &c in BERNOULLI_COEFFS.iter().rev() {
        tail = tail * u2 + c;
    }
    u - 0.25 * u2 + u * u2 * tail
}

/// Complex dilogarithm on the principal branch, `z` off `(1, inf)`.
pub(crate) fn dilog_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 1.0 {
        return Complex64::new(dilog_unchecked(z.re), 0.0);
    }
    let norm_sqr = z.norm_sqr();
    if norm_sqr < 1e-40 {
        return z;
    }
    let one = Complex64::new(1.0, 0.0);
    let inverted = |z: Complex64| {
        let log_mz = (-z).ln();
        let u = -(one - one / z).ln();
        -bernoulli_series(u) - 0.5 * log_mz * log_mz - PI2_6
    };
    if z.re <= 0.5 {
        if norm_sqr > 1.0 {
            inverted(z)
        } else {
            bernoulli_series(-(one - z).ln())
        }
    } else if norm_sqr <= 2.0 * z.re {
        // |1 - z| <= 1: reflect onto 1 - z.
        let log_z = z.ln();
        -bernoulli_series(-log_z) - log_z * (one - z).ln() + PI2_6
    } else {
        inverted(z)
    }
}

/// Imaginary part of `Li2(z)` on the principal branch.
///
/// Real arguments below 1 give exactly zero; arguments on the cut `[1, inf)`
/// are rejected.
pub fn im_dilog(z: ComplexValue) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() || (z.im == 0.0 && z.re >= 1.0) {
        return Err(Error::Domain {
            function: "im_dilog",
            argument: format!("{z}"),
        });
    }
    if z.im == 0.0 {
        return Ok(0.0);
    }
    Ok(dilog_complex(z).im)
}

/// The `z(x, y)` kernel of the average-rate closed form:
///
/// `z(x,y) = 2 ln(x-y) (atan(2x/D_y) - atan(2y/D_y)) + 2 Im Li2((y-x)/(y - j D_y/2))`.
///
/// `x == y` returns the continuous limit 0.
pub fn z_kernel(x: f64, y: f64, d_y: f64) -> Result<f64> {
    if d_y.is_nan() || d_y <= 0.0 || !d_y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "z_kernel needs d_y > 0, got {d_y}"
        )));
    }
    if !x.is_finite() || !y.is_finite() || x < y {
        return Err(Error::Domain {
            function: "z_kernel",
            argument: format!("x = {x}, y = {y}"),
        });
    }
    if x == y {
        return Ok(0.0);
    }
    Ok(z_kernel_with_gap(x, y, x - y, d_y))
}

/// `z(x, y)` with the positive gap `x - y` supplied by the caller, so that
/// callers holding a cancellation-free form of the gap can use it.
pub(crate) fn z_kernel_with_gap(x: f64, y: f64, gap: f64, d_y: f64) -> f64 {
    let half = 0.5 * d_y;
    // atan(x/b) - atan(y/b) in (0, π) for x > y.
    let arctan_diff = (gap * half).atan2(half * half + x * y);
    let denom = y * y + half * half;
    let arg = Complex64::new(-gap * y / denom, -gap * half / denom);
    2.0 * gap.ln() * arctan_diff + 2.0 * dilog_complex(arg).im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::quadrature::{integrate, Tolerance};
    use proptest::prelude::*;

    const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

    /// `-∫₀ˣ ln(1-u)/u du` by adaptive quadrature.
    fn dilog_by_quadrature(x: f64) -> f64 {
        let tol = Tolerance::new(1e-14, 1e-14);
        let f = |u: f64| {
            if u == 0.0 {
                -1.0
            } else {
                (-u).ln_1p() / u
            }
        };
        let (lo, hi, sign) = if x < 0.0 { (x, 0.0, 1.0) } else { (0.0, x, -1.0) };
        // For x < 0: -∫₀ˣ = ∫ₓ⁰.
        let v = integrate(f, lo, hi, tol).unwrap().value;
        sign * v
    }

    /// `Li2(w) = -∫₀¹ ln(1 - w t)/t dt` along the straight path 0 -> w.
    fn im_dilog_by_path_quadrature(w: Complex64) -> f64 {
        let tol = Tolerance::new(1e-14, 1e-14);
        let f = |t: f64| {
            if t == 0.0 {
                return -w.im;
            }
            (Complex64::new(1.0, 0.0) - w * t).ln().im / t
        };
        -integrate(f, 0.0, 1.0, tol).unwrap().value
    }

    fn im_dilog_by_series(z: Complex64) -> f64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        for k in 1..4000 {
            power *= z;
            sum += power / (k * k) as f64;
        }
        sum.im
    }

    #[test]
    fn dilog_trivial_values() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
        assert!((dilog(-1.0).unwrap() + PI * PI / 12.0).abs() <= 1e-15);
        assert!((dilog(1.0).unwrap() - PI2_6).abs() <= 1e-15);
        assert!((dilog(0.5).unwrap() - (PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2))).abs() <= 1e-15);
    }

    #[test]
    fn dilog_matches_quadrature_at_minus_3_7() {
        let oracle = dilog_by_quadrature(-3.7);
        // Frozen from the quadrature oracle; agrees with an arbitrary-precision
        // evaluation (-2.2468839533197609...).
        assert!((oracle - (-2.246_883_953_319_761)).abs() < 1e-12, "{oracle}");
        assert!((dilog(-3.7).unwrap() - oracle).abs() <= 1e-12);
    }

    #[test]
    fn dilog_rejects_beyond_one() {
        assert!(matches!(dilog(1.0 + 1e-12), Err(Error::Domain { .. })));
        assert!(dilog(f64::NAN).is_err());
    }

    #[test]
    fn dilog_large_negative_arguments() {
        // Rate closed form evaluates Li2 at -A/(h² + D_y²/4), up to ~1e6.
        for &x in &[-10.0, -137.5, -2.0e3, -7.3e5] {
            assert!((dilog(x).unwrap() - dilog_by_quadrature(x)).abs() <= 1e-10 * (1.0 + x.abs().ln().powi(2)));
        }
    }

    #[test]
    fn dilog_piece_boundaries_are_continuous() {
        for &b in &[-2.0f64, -1.0, -0.5, 0.5] {
            let lo = dilog(b - 1e-12).unwrap();
            let hi = dilog(b + 1e-12).unwrap();
            assert!((lo - hi).abs() < 1e-11, "jump at {b}: {lo} vs {hi}");
        }
    }

    #[test]
    fn im_dilog_real_axis() {
        assert_eq!(im_dilog(Complex64::new(0.5, 0.0)).unwrap(), 0.0);
        assert_eq!(im_dilog(Complex64::new(-40.0, 0.0)).unwrap(), 0.0);
        assert!(im_dilog(Complex64::new(1.0, 0.0)).is_err());
        assert!(im_dilog(Complex64::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn im_dilog_at_i_is_catalan() {
        let oracle = im_dilog_by_path_quadrature(Complex64::new(0.0, 1.0));
        assert!((oracle - CATALAN).abs() < 1e-12);
        assert!((im_dilog(Complex64::new(0.0, 1.0)).unwrap() - CATALAN).abs() <= 1e-10);
    }

    #[test]
    fn im_dilog_matches_series_inside_disk() {
        let z = Complex64::new(-0.3, 0.7);
        let oracle = im_dilog_by_series(z);
        assert!((im_dilog(z).unwrap() - oracle).abs() <= 1e-10);
    }

    #[test]
    fn im_dilog_matches_path_quadrature_everywhere() {
        // Points covering every branch of the evaluation: inside the disk,
        // near the unit circle at arg ±π/3, reflected, and inverted.
        let pts = [
            (0.1, 0.2),
            (0.5, 0.8660254),
            (0.5, -0.8660254),
            (0.9, 0.3),
            (1.2, 0.01),
            (2.0, -3.0),
            (-7.0, 0.5),
            (-0.5172, -8.62),
            (-51.0, -86.2),
        ];
        for &(re, im) in &pts {
            let z = Complex64::new(re, im);
            let got = im_dilog(z).unwrap();
            let want = im_dilog_by_path_quadrature(z);
            assert!((got - want).abs() <= 1e-10, "z = {z}: {got} vs {want}");
        }
    }

    #[test]
    fn z_kernel_degenerate_and_domain() {
        assert_eq!(z_kernel(3.0, 3.0, 10.0).unwrap(), 0.0);
        assert!(z_kernel(3.0 + 1e-12, 3.0, 10.0).unwrap().abs() < 1e-9);
        assert!(z_kernel(2.0, 3.0, 10.0).is_err());
        assert!(z_kernel(4.0, 3.0, 0.0).is_err());
    }

    fn z_kernel_term_by_term(x: f64, y: f64, d_y: f64) -> f64 {
        let b = d_y / 2.0;
        let w = Complex64::new(y - x, 0.0) / Complex64::new(y, -b);
        2.0 * (x - y).ln() * ((x / b).atan() - (y / b).atan()) + 2.0 * im_dilog_by_path_quadrature(w)
    }

    #[test]
    fn z_kernel_values() {
        // Oracles: term-by-term with path-quadrature Li2; frozen values agree
        // with an arbitrary-precision evaluation.
        let a = z_kernel_term_by_term(5.0, 3.0, 10.0);
        let b = z_kernel_term_by_term(4.0, -3.0, 10.0);
        assert!((a - (-0.198_287_348_970_873_47)).abs() < 1e-11);
        assert!((b - 2.284_447_420_137_679).abs() < 1e-11);
        assert!((z_kernel(5.0, 3.0, 10.0).unwrap() - a).abs() < 1e-10);
        assert!((z_kernel(4.0, -3.0, 10.0).unwrap() - b).abs() < 1e-10);
    }

    #[test]
    fn z_kernel_derivative_matches_integrand() {
        // d/dx z(x,y) = D_y ln(x-y) / (x² + D_y²/4).
        let d_y = 10.0;
        for &(x, y) in &[(5.0, 3.0), (40.0, -3.0), (3.5, 3.0), (250.0, 3.0)] {
            let step = 1e-5 * x;
            let fd = (z_kernel(x + step, y, d_y).unwrap() - z_kernel(x - step, y, d_y).unwrap())
                / (2.0 * step);
            let exact = d_y * (x - y).ln() / (x * x + 0.25 * d_y * d_y);
            assert!((fd - exact).abs() < 1e-6, "({x},{y}): {fd} vs {exact}");
        }
    }

    #[test]
    fn z_kernel_difference_is_lipschitz_continuous() {
        let d_y = 10.0;
        for &h in &[1.0, 3.0, 5.0] {
            let n = 20_000;
            let lo = h + 1e-6;
            let step = (100.0 - lo) / n as f64;
            let g = |x: f64| z_kernel(x, h, d_y).unwrap() - z_kernel(x, -h, d_y).unwrap();
            let mut prev = g(lo);
            let mut prev_x = lo;
            for i in 1..=n {
                let x = lo + step * i as f64;
                let cur = g(x);
                assert!(cur.is_finite());
                // |d/dx (z(x,h) - z(x,-h))| = D_y |ln((x-h)/(x+h))| / (x² + D_y²/4),
                // bounded on [prev_x, x] by its value at prev_x.
                let lipschitz = d_y * ((prev_x - h) / (prev_x + h)).ln().abs()
                    / (prev_x * prev_x + 0.25 * d_y * d_y);
                assert!(
                    (cur - prev).abs() <= 1.01 * lipschitz * step + 1e-12,
                    "jump near x = {x} for h = {h}"
                );
                prev = cur;
                prev_x = x;
            }
        }
    }

    #[test]
    fn difference_of_conjugate_dilogs_is_twice_imaginary_part() {
        // Li2(w) - Li2(conj w) = 2j Im Li2(w) for the arguments (h - ω)/(h ∓ j D_y/2).
        let (h, d_y) = (3.0, 10.0);
        for &omega in &[3.0001, 4.0, 17.0, 260.0] {
            let w = Complex64::new(h - omega, 0.0) / Complex64::new(h, -d_y / 2.0);
            let diff = dilog_complex(w) - dilog_complex(w.conj());
            let im = im_dilog(w).unwrap();
            assert!(diff.re.abs() < 1e-12);
            assert!((diff.im - 2.0 * im).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn im_dilog_schwarz_reflection(re in -60.0f64..60.0, im in 1e-6f64..60.0) {
            let z = Complex64::new(re, im);
            let a = im_dilog(z).unwrap();
            let b = im_dilog(z.conj()).unwrap();
            prop_assert!((a + b).abs() <= 1e-12);
        }

        #[test]
        fn dilog_matches_defining_integral(x in -50.0f64..0.99) {
            prop_assert!((dilog(x).unwrap() - dilog_by_quadrature(x)).abs() <= 1e-10);
        }
    }
}
