//! Max-min-SINR transmit power and CDI bit allocation for zeroforcing
//! MIMO-NOMA and regularized-zeroforcing MIMO-OMA downlinks.
//!
//! The crate is organized around a single source of truth for the
//! large-system SINR formulas ([`model`]) and several allocators built on
//! top of it:
//!
//! - [`gp`] — posynomial modeling, geometric-program builders for the NOMA
//!   and OMA max-min problems, and a self-contained log-domain barrier
//!   solver;
//! - [`fill`] — progressive filling: greedy chunk-wise allocation of power
//!   and bits to the currently worst user group;
//! - [`grouping`] — 1-D K-means seeded grouping of user pairs by SINR with
//!   iterative worst-pair demotion;
//! - [`oma`] — regularized-zeroforcing asymptotics and the alternating
//!   power/bits/regularizer optimization;
//! - [`sim`] — finite-size Monte Carlo validation: channel generation, CDI
//!   quantization, ZF/RZF precoding, instantaneous SINR measurement.
//!
//! All SINRs are linear ratios; conversion to dB happens only in reports.

pub mod model;
pub mod scenario;

pub use model::{LoadRatios, NoiseRatio, PairProfile, SystemDims};
pub use scenario::{EntityId, GroupingMap, NomaAllocation, NomaScenario};

/// `10·log10(x)` for reporting.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Inverse of [`to_db`].
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
