//! Deployment geometry, radio constants and the received SNR.
//!
//! The waveguide runs along the x-axis at height `h` from the feed point
//! `(0, 0, h)` to `(d_x, 0, h)`. Users sit on the floor rectangle
//! `[0, d_x] x [-d_y/2, d_y/2]`. Phase terms drop out of the SNR, so only
//! path loss and in-guide absorption are modelled.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reference distance of the far-field path-loss model, metres. The
/// conventional antenna's distance is clamped to this value.
pub const REFERENCE_DISTANCE: f64 = 1.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(value: f64) -> f64 {
    10.0 * value.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Physical scenario: geometry, waveguide, radio constants and antenna count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    /// Waveguide / service-region length along x, m.
    pub d_x: f64,
    /// Service-region width along y, m.
    pub d_y: f64,
    /// Waveguide height, m.
    pub h: f64,
    /// In-guide power absorption coefficient, 1/m.
    pub alpha: f64,
    /// Carrier frequency, Hz.
    pub f_c: f64,
    /// Effective refractive index of the guide.
    pub n_eff: f64,
    /// Transmit power, W.
    pub p_t: f64,
    /// Noise power, W.
    pub sigma2: f64,
    /// Number of antennas (pinched or co-located at the feed point).
    pub n_antennas: u32,
}

impl Default for Deployment {
    /// Reference scenario: 10 m x 10 m floor, h = 3 m, α = 0.01 1/m,
    /// 28 GHz, n_eff = 1.4, σ² = -90 dBm, γ_t = 100 dB, one antenna.
    fn default() -> Self {
        let sigma2 = dbm_to_watts(-90.0);
        Self {
            d_x: 10.0,
            d_y: 10.0,
            h: 3.0,
            alpha: 0.01,
            f_c: 28e9,
            n_eff: 1.4,
            p_t: sigma2 * db_to_linear(100.0),
            sigma2,
            n_antennas: 1,
        }
    }
}

impl Deployment {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("d_x", self.d_x)?;
        positive("d_y", self.d_y)?;
        positive("h", self.h)?;
        positive("f_c", self.f_c)?;
        positive("p_t", self.p_t)?;
        positive("sigma2", self.sigma2)?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be non-negative and finite, got {}",
                self.alpha
            )));
        }
        if !(self.n_eff > 1.0 && self.n_eff.is_finite()) {
            return Err(Error::InvalidParameter(format!("n_eff must exceed 1, got {}", self.n_eff)));
        }
        if self.n_antennas == 0 {
            return Err(Error::InvalidParameter("n_antennas must be at least 1".into()));
        }
        Ok(())
    }

    /// Free-space wavelength `c / f_c`.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_c
    }

    /// In-guide wavelength `λ / n_eff`. Does not enter any magnitude.
    pub fn guided_wavelength(&self) -> f64 {
        self.wavelength() / self.n_eff
    }

    /// Path-loss constant at 1 m, `λ² / (16 π²)`.
    pub fn eta(&self) -> f64 {
        let lambda = self.wavelength();
        lambda * lambda / (16.0 * PI * PI)
    }

    /// Transmit SNR `P_t / σ²` (linear).
    pub fn gamma_t(&self) -> f64 {
        self.p_t / self.sigma2
    }

    pub fn gamma_t_db(&self) -> f64 {
        linear_to_db(self.gamma_t())
    }

    /// Sets `P_t` so that `P_t / σ²` equals `gamma_t_db`.
    pub fn with_gamma_t_db(mut self, gamma_t_db: f64) -> Self {
        self.p_t = self.sigma2 * db_to_linear(gamma_t_db);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_d_x(mut self, d_x: f64) -> Self {
        self.d_x = d_x;
        self
    }

    pub fn with_n_antennas(mut self, n: u32) -> Self {
        self.n_antennas = n;
        self
    }

    /// `η N P_t / σ²`, the SNR scale shared by every strategy.
    pub fn snr_scale(&self) -> f64 {
        self.eta() * self.n_antennas as f64 * self.p_t / self.sigma2
    }
}

/// User location on the service floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserPosition {
    x_m: f64,
    y_m: f64,
}

impl UserPosition {
    pub fn new(dep: &Deployment, x_m: f64, y_m: f64) -> Result<Self> {
        if !(0.0..=dep.d_x).contains(&x_m) || !(-0.5 * dep.d_y..=0.5 * dep.d_y).contains(&y_m) {
            return Err(Error::InvalidParameter(format!(
                "user ({x_m}, {y_m}) outside [0, {}] x [-{}, {}]",
                dep.d_x,
                0.5 * dep.d_y,
                0.5 * dep.d_y
            )));
        }
        Ok(Self { x_m, y_m })
    }

    /// Caller guarantees the bounds (Monte Carlo draws).
    pub(crate) fn from_draw(x_m: f64, y_m: f64) -> Self {
        Self { x_m, y_m }
    }

    pub fn x_m(&self) -> f64 {
        self.x_m
    }

    pub fn y_m(&self) -> f64 {
        self.y_m
    }
}

/// SNR constants with the N-fold antenna gain folded in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// `C = η N P_t / (γ_thr σ²)`, m².
    pub c_const: f64,
    /// `A = η N P_t / σ²`, m².
    pub a_const: f64,
    pub gamma_thr: f64,
}

pub fn derive_constants(dep: &Deployment, gamma_thr: f64) -> Result<DerivedConstants> {
    dep.validate()?;
    if !(gamma_thr > 0.0 && gamma_thr.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma_thr must be positive, got {gamma_thr}")));
    }
    let a_const = dep.snr_scale();
    Ok(DerivedConstants {
        c_const: a_const / gamma_thr,
        a_const,
        gamma_thr,
    })
}

/// Received SNR with the antenna pinched at `x_p`:
/// `η N P_t e^{-α x_p} / (σ² ((x_m - x_p)² + y_m² + h²))`.
pub fn received_snr(dep: &Deployment, x_p: f64, user: &UserPosition) -> f64 {
    let dx = user.x_m - x_p;
    let dist2 = dx * dx + user.y_m * user.y_m + dep.h * dep.h;
    dep.snr_scale() * (-dep.alpha * x_p).exp() / dist2
}

/// SNR of the conventional antenna(s) on the floor at the corner `(0, 0, 0)`.
/// Squared distance is clamped to the 1 m reference distance.
pub fn benchmark_snr(dep: &Deployment, user: &UserPosition) -> f64 {
    let dist2 = (user.x_m * user.x_m + user.y_m * user.y_m).max(REFERENCE_DISTANCE * REFERENCE_DISTANCE);
    dep.snr_scale() / dist2
}
