//! Performance analytics for pinching-antenna systems (PAS) fed by a lossy
//! dielectric waveguide.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: real and complex dilogarithm kernels used by the average-rate
//!   closed form.
//! - [`model`]: deployment geometry, radio constants and the received SNR.
//! - [`analytics`]: closed-form outage probability (lossy and lossless) and
//!   average rate for the antenna pinched at the user's x-coordinate.
//! - [`placement`]: the SNR-optimal pinching position for a given user.
//! - [`oracles`]: adaptive quadrature, counter-based Monte Carlo and the power
//!   search used to check every closed form independently.

pub mod analytics;
pub mod error;
pub mod model;
pub mod oracles;
pub mod placement;
pub mod specfun;

pub use analytics::{Method, OutageBranch, OutageResult, RateResult};
pub use error::{Error, Result};
pub use model::{DerivedConstants, Deployment, UserPosition};
pub use oracles::{McEstimate, Strategy};
pub use placement::{PlacementBranch, PlacementSolution};
