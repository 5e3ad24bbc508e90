//! Monte Carlo estimates over uniformly dropped users.
//!
//! Samples are split into fixed blocks of [`BLOCK_SIZE`]; block `b` draws
//! from stream `b` of the seed. Blocks run in parallel and are merged in
//! block order, so estimates depend only on `(seed, n_samples)` and never on
//! the worker count. Every strategy sees the same users for the same seed.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{benchmark_snr, received_snr, Deployment, UserPosition};
use crate::oracles::rng::SampleStream;
use crate::placement::optimal_position;

pub const BLOCK_SIZE: u64 = 1 << 16;

/// Where the single serving antenna sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Pinched at `x_p = x_m`.
    PinchAtUserX,
    /// Pinched at the SNR-maximising position.
    PinchOptimal,
    /// Conventional ground-level antenna at the origin.
    ConventionalFeedPoint,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::PinchAtUserX,
        Strategy::PinchOptimal,
        Strategy::ConventionalFeedPoint,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::PinchAtUserX => "pinch-at-user-x",
            Strategy::PinchOptimal => "pinch-optimal",
            Strategy::ConventionalFeedPoint => "conventional-feed-point",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown strategy {s:?}; expected one of pinch-at-user-x, pinch-optimal, conventional-feed-point"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

pub fn strategy_snr(dep: &Deployment, strategy: Strategy, user: &UserPosition) -> f64 {
    match strategy {
        Strategy::PinchAtUserX => received_snr(dep, user.x_m(), user),
        Strategy::PinchOptimal => received_snr(dep, optimal_position(dep, user).x_star, user),
        Strategy::ConventionalFeedPoint => benchmark_snr(dep, user),
    }
}

/// One uniform user on `[0, D_x] x [-D_y/2, D_y/2]`.
pub fn draw_user(dep: &Deployment, stream: &mut SampleStream) -> UserPosition {
    let (u, v) = stream.next_pair();
    UserPosition::from_draw(u * dep.d_x, (v - 0.5) * dep.d_y)
}

fn check_samples(n_samples: u64) -> Result<()> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least one sample".into()));
    }
    Ok(())
}

/// Runs `per_block(stream, count)` for every block and returns the partials
/// in block order.
fn run_blocks<T, F>(n_samples: u64, seed: u64, per_block: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SampleStream, u64) -> T + Sync,
{
    let n_blocks = n_samples.div_ceil(BLOCK_SIZE);
    (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK_SIZE.min(n_samples - b * BLOCK_SIZE);
            let mut stream = SampleStream::new(seed, b);
            per_block(&mut stream, count)
        })
        .collect()
}

/// Outage estimate: fraction of users with SNR at or below `gamma_thr`.
pub fn simulate_outage(
    dep: &Deployment,
    gamma_thr: f64,
    strategy: Strategy,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    dep.validate()?;
    check_samples(n_samples)?;
    if !(gamma_thr > 0.0 && gamma_thr.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma_thr must be positive, got {gamma_thr}")));
    }
    let counts = run_blocks(n_samples, seed, |stream, count| {
        (0..count)
            .filter(|_| strategy_snr(dep, strategy, &draw_user(dep, stream)) <= gamma_thr)
            .count() as u64
    });
    let failures: u64 = counts.iter().sum();
    let n = n_samples as f64;
    let p = failures as f64 / n;
    Ok(McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
        n_samples,
        seed,
    })
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

/// Mean of `log2(1 + SNR)` over users.
pub fn simulate_rate(dep: &Deployment, strategy: Strategy, n_samples: u64, seed: u64) -> Result<McEstimate> {
    dep.validate()?;
    check_samples(n_samples)?;
    let partials = run_blocks(n_samples, seed, |stream, count| {
        let mut m = Moments::default();
        for _ in 0..count {
            m.push(strategy_snr(dep, strategy, &draw_user(dep, stream)).ln_1p() / std::f64::consts::LN_2);
        }
        m
    });
    let total = partials.into_iter().fold(Moments::default(), Moments::merge);
    let std_error = if total.n > 1.0 {
        (total.m2 / (total.n - 1.0) / total.n).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        value: total.mean,
        std_error,
        n_samples,
        seed,
    })
}
