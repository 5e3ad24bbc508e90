//! Independent numerical routes to every closed-form quantity.

pub mod integrals;
pub mod monte_carlo;
pub mod power;
pub mod quadrature;
pub mod rng;

pub use integrals::{
    benchmark_outage_quadrature, benchmark_rate_quadrature, outage_quadrature, rate_quadrature,
};
pub use monte_carlo::{draw_user, simulate_outage, simulate_rate, strategy_snr, McEstimate, Strategy};
pub use power::{find_power_for_outage, strategy_outage, PowerRequirement, PowerSearch};
