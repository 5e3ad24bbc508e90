use pinchperf_core::analytics::{avg_rate, avg_rate_lossy, outage, outage_lossless, outage_lossy};
use pinchperf_core::model::{benchmark_snr, received_snr};
use pinchperf_core::oracles::{
    find_power_for_outage, outage_quadrature, rate_quadrature, simulate_outage, PowerSearch,
};
use pinchperf_core::{Deployment, Method, OutageBranch, Strategy, UserPosition};
use proptest::prelude::*;

fn scenario(gamma_t_db: f64, alpha: f64, d_x: f64, d_y: f64, h: f64) -> Deployment {
    Deployment { d_y, h, ..Deployment::default() }
        .with_gamma_t_db(gamma_t_db)
        .with_alpha(alpha)
        .with_d_x(d_x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rate_closed_form_matches_quadrature(
        g in 70.0f64..125.0, alpha in 1e-3f64..0.2, d_x in 2.0f64..40.0, d_y in 2.0f64..20.0, h in 1.0f64..6.0
    ) {
        let dep = scenario(g, alpha, d_x, d_y, h);
        let cf = avg_rate_lossy(&dep).unwrap().rate;
        let q = rate_quadrature(&dep).unwrap().rate;
        prop_assert!(((cf - q) / q.max(1e-12)).abs() <= 1e-6, "{} vs {}", cf, q);
    }

    #[test]
    fn outage_closed_form_matches_quadrature(
        g in 85.0f64..120.0, alpha in 1e-3f64..0.2, d_x in 2.0f64..40.0, d_y in 2.0f64..20.0, h in 1.0f64..6.0
    ) {
        let dep = scenario(g, alpha, d_x, d_y, h);
        let cf = outage_lossy(&dep, 100.0).unwrap();
        let q = outage_quadrature(&dep, 100.0).unwrap();
        prop_assert!((cf.probability - q.probability).abs() <= 1e-9);
        prop_assert_eq!(cf.method, Method::ClosedForm);
        prop_assert_eq!(q.method, Method::Quadrature);
    }

    #[test]
    fn tiny_loss_approaches_lossless(g in 85.0f64..120.0, d_x in 2.0f64..40.0, d_y in 2.0f64..20.0, h in 1.0f64..6.0) {
        let lossy = outage_lossy(&scenario(g, 1e-8, d_x, d_y, h), 100.0).unwrap().probability;
        let lossless = outage_lossless(&scenario(g, 0.0, d_x, d_y, h), 100.0).unwrap().probability;
        prop_assert!((lossy - lossless).abs() <= 1e-5);
    }

    #[test]
    fn snr_is_even_and_non_increasing_in_y(x in 0.0f64..10.0, y in 0.0f64..5.0, dy in 0.0f64..5.0, xp in 0.0f64..10.0) {
        let dep = Deployment::default();
        let near = UserPosition::new(&dep, x, y.min(5.0)).unwrap();
        let mirrored = UserPosition::new(&dep, x, -y.min(5.0)).unwrap();
        let far = UserPosition::new(&dep, x, (y + dy).min(5.0)).unwrap();
        prop_assert_eq!(received_snr(&dep, xp, &near), received_snr(&dep, xp, &mirrored));
        prop_assert!(received_snr(&dep, xp, &far) <= received_snr(&dep, xp, &near));
        prop_assert!(benchmark_snr(&dep, &far) <= benchmark_snr(&dep, &near));
    }
}

#[test]
fn routers_follow_alpha() {
    let lossless = Deployment::default().with_alpha(0.0);
    let r = outage(&lossless, 100.0).unwrap();
    assert!(r.branch.unwrap().is_lossless());
    assert_eq!(avg_rate(&lossless).unwrap().method, Method::Quadrature);
    let lossy = Deployment::default();
    assert!(OutageBranch::LOSSY.contains(&outage(&lossy, 100.0).unwrap().branch.unwrap()));
    assert_eq!(avg_rate(&lossy).unwrap().method, Method::ClosedForm);
}

#[test]
fn optimal_placement_never_needs_more_power() {
    // Monte Carlo with a fixed seed at every bisection step.
    let search = PowerSearch { mc_samples: 200_000, seed: 5, ..PowerSearch::default() };
    let dep = Deployment::default().with_alpha(0.1).with_d_x(30.0);
    let at_x = find_power_for_outage(&dep, 100.0, 1e-2, Strategy::PinchAtUserX, &search).unwrap();
    let opt = find_power_for_outage(&dep, 100.0, 1e-2, Strategy::PinchOptimal, &search).unwrap();
    assert!(opt.gamma_t_db <= at_x.gamma_t_db + 0.05, "{opt:?} vs {at_x:?}");
    let check = simulate_outage(&dep.with_gamma_t_db(opt.gamma_t_db), 100.0, Strategy::PinchOptimal, 200_000, 5).unwrap();
    assert_eq!(check.value, opt.outage);
}
