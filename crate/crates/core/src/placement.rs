//! SNR-optimal pinching position for a single user.
//!
//! The objective is `f(x) = e^{-αx} / ((x_m - x)² + s)` with
//! `s = y_m² + h²`. Writing `z = x_m - x`, the derivative numerator is
//! `-α(z² + s) + 2z`, whose roots are `z = (1 ± sqrt(1 - α² s)) / α`.
//! The smaller root is the local maximum nearest the user.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Deployment, UserPosition};

/// `|Δ|` at or below this is treated as a double root.
pub const DOUBLE_ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementBranch {
    InteriorRoot,
    DoubleRoot,
    FeedPoint,
    Lossless,
}

impl PlacementBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlacementBranch::InteriorRoot => "interior-root",
            PlacementBranch::DoubleRoot => "double-root",
            PlacementBranch::FeedPoint => "feed-point",
            PlacementBranch::Lossless => "lossless",
        }
    }
}

impl fmt::Display for PlacementBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementSolution {
    pub x_star: f64,
    pub branch: PlacementBranch,
    /// `f(x_star)`.
    pub objective: f64,
    /// `Δ = 4 - 4α²(y_m² + h²)`.
    pub discriminant: f64,
}

fn objective(alpha: f64, x_m: f64, s: f64, x: f64) -> f64 {
    let dx = x_m - x;
    (-alpha * x).exp() / (dx * dx + s)
}

fn spacing(dep: &Deployment, user: &UserPosition) -> f64 {
    user.y_m() * user.y_m() + dep.h * dep.h
}

/// `f(x_p)`; the SNR is `snr_scale * f(x_p)`.
pub fn snr_objective(dep: &Deployment, user: &UserPosition, x_p: f64) -> f64 {
    objective(dep.alpha, user.x_m(), spacing(dep, user), x_p)
}

/// Derivative numerator `-α((x_m - x)² + s) + 2(x_m - x)`.
pub fn stationarity_residual(dep: &Deployment, user: &UserPosition, x_p: f64) -> f64 {
    let z = user.x_m() - x_p;
    -dep.alpha * (z * z + spacing(dep, user)) + 2.0 * z
}

/// Offset `x_m - x_o1 = (1 - sqrt(1 - α² s)) / α`, in a form without
/// cancellation for small `α² s`. `None` when the root is complex.
pub fn near_root_offset(alpha: f64, s: f64) -> Option<f64> {
    let r = 1.0 - alpha * alpha * s;
    if r < 0.0 {
        None
    } else {
        Some(alpha * s / (1.0 + r.sqrt()))
    }
}

pub fn optimal_position(dep: &Deployment, user: &UserPosition) -> PlacementSolution {
    let alpha = dep.alpha;
    let x_m = user.x_m();
    let s = spacing(dep, user);
    let discriminant = 4.0 - 4.0 * alpha * alpha * s;
    let f = |x: f64| objective(alpha, x_m, s, x);

    let (x, branch) = if alpha == 0.0 {
        (x_m, PlacementBranch::Lossless)
    } else if discriminant > DOUBLE_ROOT_TOLERANCE {
        let x_o1 = x_m - near_root_offset(alpha, s).unwrap_or(0.0);
        if x_o1 > 0.0 && f(x_o1) > f(0.0) {
            (x_o1, PlacementBranch::InteriorRoot)
        } else {
            (0.0, PlacementBranch::FeedPoint)
        }
    } else if discriminant.abs() <= DOUBLE_ROOT_TOLERANCE && x_m - 1.0 / alpha > 0.0 {
        (x_m - 1.0 / alpha, PlacementBranch::DoubleRoot)
    } else {
        (0.0, PlacementBranch::FeedPoint)
    };
    let x_star = x.clamp(0.0, dep.d_x);
    PlacementSolution {
        x_star,
        branch,
        objective: f(x_star),
        discriminant,
    }
}

/// `f(x_star) / f(x_m)`.
pub fn placement_gain(dep: &Deployment, user: &UserPosition) -> f64 {
    let sol = optimal_position(dep, user);
    sol.objective / snr_objective(dep, user, user.x_m())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn setup(alpha: f64, h: f64, d_x: f64, x_m: f64, y_m: f64) -> (Deployment, UserPosition) {
        let dep = Deployment {
            h,
            d_x,
            ..Deployment::default().with_alpha(alpha)
        };
        let user = UserPosition::new(&dep, x_m, y_m).unwrap();
        (dep, user)
    }

    fn grid_max(dep: &Deployment, user: &UserPosition, points: usize) -> (f64, f64) {
        (0..points)
            .map(|i| {
                let x = dep.d_x * i as f64 / (points - 1) as f64;
                (x, snr_objective(dep, user, x))
            })
            .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    }

    #[test]
    fn objective_values() {
        let (dep, user) = setup(0.1, 3.0, 10.0, 5.0, 1.0);
        let direct = (-0.2f64).exp() / (9.0 + 1.0 + 9.0);
        assert!((snr_objective(&dep, &user, 2.0) - direct).abs() < 1e-16);
        let at_user = (-0.5f64).exp() / 10.0;
        assert!((snr_objective(&dep, &user, 5.0) - at_user).abs() < 1e-16);
    }

    #[test]
    fn lossless_returns_user_x() {
        let (dep, user) = setup(0.0, 3.0, 10.0, 7.5, -2.0);
        let sol = optimal_position(&dep, &user);
        assert_eq!(sol.x_star, 7.5);
        assert_eq!(sol.branch, PlacementBranch::Lossless);
        assert_eq!(placement_gain(&dep, &user), 1.0);
        assert_eq!(sol.objective, 1.0 / 13.0);
    }

    #[test]
    fn reference_user_sits_just_before_x_m() {
        let (dep, user) = setup(0.01, 3.0, 10.0, 5.0, 2.0);
        let sol = optimal_position(&dep, &user);
        assert_eq!(sol.branch, PlacementBranch::InteriorRoot);
        let offset = (1.0 - (1.0f64 - 0.0013).sqrt()) / 0.01;
        assert!((sol.x_star - (5.0 - offset)).abs() < 1e-12);
        assert!((5.0 - sol.x_star - 0.0651).abs() < 1e-4);
        let step = 1e-4;
        let n = (dep.d_x / step).round() as usize + 1;
        let (x_grid, f_grid) = grid_max(&dep, &user, n);
        assert!((x_grid - sol.x_star).abs() <= step);
        assert!(sol.objective >= f_grid);
        assert!(placement_gain(&dep, &user) >= 1.0);
    }

    #[test]
    fn complex_roots_place_at_feed() {
        // α² s = 0.25 · 13 > 1.
        let (dep, user) = setup(0.5, 3.0, 10.0, 5.0, 2.0);
        let sol = optimal_position(&dep, &user);
        assert!(sol.discriminant < 0.0);
        assert_eq!((sol.x_star, sol.branch), (0.0, PlacementBranch::FeedPoint));
        let gain = placement_gain(&dep, &user);
        assert_eq!(gain, snr_objective(&dep, &user, 0.0) / snr_objective(&dep, &user, 5.0));
        assert!(gain > 1.0);
    }

    #[test]
    fn far_user_on_long_guide() {
        let (dep, user) = setup(0.1, 3.0, 30.0, 25.0, 4.0);
        let sol = optimal_position(&dep, &user);
        let (_, f_grid) = grid_max(&dep, &user, 300_001);
        assert!(sol.objective >= f_grid - 1e-12);
        assert!(placement_gain(&dep, &user) >= 1.0);
    }

    #[test]
    fn feed_point_beats_interior_root() {
        // Δ = 0.1 > 0 and x_o1 > 0, yet the feed itself is better.
        let dep = Deployment {
            h: 3.9f64.sqrt(),
            ..Deployment::default().with_alpha(0.5)
        };
        let user = UserPosition::new(&dep, 3.0, 0.0).unwrap();
        let sol = optimal_position(&dep, &user);
        assert!(sol.discriminant > 0.0);
        assert_eq!((sol.x_star, sol.branch), (0.0, PlacementBranch::FeedPoint));
        let (_, f_grid) = grid_max(&dep, &user, 100_001);
        assert!(sol.objective >= f_grid);
    }

    /// With Δ = 0 the objective is non-increasing, so the double-root
    /// position loses to the feed point; it is still what the rule returns.
    #[test]
    fn double_root_is_not_the_argmax() {
        let (dep, user) = setup(1.0 / 3.0, 3.0, 10.0, 5.0, 0.0);
        let sol = optimal_position(&dep, &user);
        assert!(sol.discriminant.abs() <= DOUBLE_ROOT_TOLERANCE);
        assert_eq!(sol.branch, PlacementBranch::DoubleRoot);
        assert!((sol.x_star - 2.0).abs() < 1e-12);
        assert!(snr_objective(&dep, &user, 0.0) > sol.objective);
        // Still at least as good as pinching at the user.
        assert!(placement_gain(&dep, &user) >= 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn gain_never_below_one(alpha in 0.0f64..0.5, h in 1.0f64..5.0, u in 0.0f64..1.0, v in -0.5f64..0.5, long in any::<bool>()) {
            let d_x = if long { 30.0 } else { 10.0 };
            let (dep, user) = setup(alpha, h, d_x, u * d_x, v * 10.0);
            prop_assert!(placement_gain(&dep, &user) >= 1.0 - 1e-12);
        }

        #[test]
        fn beats_dense_grid(alpha in 0.0f64..0.5, h in 1.0f64..5.0, u in 0.0f64..1.0, v in -0.5f64..0.5, long in any::<bool>()) {
            let d_x = if long { 30.0 } else { 10.0 };
            let (dep, user) = setup(alpha, h, d_x, u * d_x, v * 10.0);
            let sol = optimal_position(&dep, &user);
            let (_, f_grid) = grid_max(&dep, &user, 20_001);
            prop_assert!(sol.objective >= f_grid - 1e-9);
        }

        #[test]
        fn interior_root_is_stationary(alpha in 1e-4f64..0.5, h in 1.0f64..5.0, u in 0.0f64..1.0, v in -0.5f64..0.5) {
            let (dep, user) = setup(alpha, h, 10.0, u * 10.0, v * 10.0);
            let sol = optimal_position(&dep, &user);
            if sol.branch == PlacementBranch::InteriorRoot && sol.x_star < dep.d_x {
                prop_assert!(stationarity_residual(&dep, &user, sol.x_star).abs() <= 1e-9);
            }
        }

        #[test]
        fn small_loss_stays_near_user(alpha in 0.0f64..0.01, h in 1.0f64..5.0, u in 0.0f64..1.0, v in -0.5f64..0.5) {
            let (dep, user) = setup(alpha, h, 10.0, u * 10.0, v * 10.0);
            let s = user.y_m().powi(2) + h * h;
            prop_assume!(s <= 34.0);
            let sol = optimal_position(&dep, &user);
            let bound = near_root_offset(alpha, s).unwrap();
            prop_assert!((sol.x_star - user.x_m()).abs() <= bound + 1e-12);
            prop_assert!(sol.objective >= snr_objective(&dep, &user, user.x_m()) * (1.0 - 1e-12));
        }
    }
}
