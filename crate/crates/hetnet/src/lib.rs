//! Downlink coverage analysis for K-tier heterogeneous cellular networks.
//!
//! Base stations of each tier form an independent planar Poisson process
//! with its own density, transmit power, association bias, path-loss
//! exponent, fading law and SINR threshold. The receiver attaches to the
//! strongest biased signal. This crate computes the resulting coverage
//! probability three ways:
//!
//! * [`analytic::coverage_probability`] - characteristic-function double
//!   integral, valid for any exponents, thresholds and noise;
//! * [`analytic::coverage_closed_form`] - the interference-limited,
//!   equal-exponent reduction;
//! * [`simulate::simulate_2d`] / [`simulate::simulate_equivalent_1d`] -
//!   two independent Monte-Carlo estimators, one planar and one through the
//!   equivalent 1-D point process.
//!
//! Supporting pieces: tier-association probabilities, nearest-distance and
//! serving-distance laws ([`analytic`]), fading fractional moments
//! ([`model`]) and the special functions the integrals need ([`special`]).

pub mod analytic;
pub mod error;
pub mod model;
pub mod simulate;
pub mod special;
pub mod stats;

mod quad;

pub use analytic::{
    coverage_closed_form, coverage_probability, coverage_probability_with, equivalent_density,
    nearest_tier_distance_tail, serving_distance_pdf, tier_probabilities, CoverageConfig,
    CoverageMethod, CoverageResult, EquivalentDensity, TierProbabilities,
};
pub use error::{Error, Result, Violation};
pub use model::{db_to_linear, linear_to_db, FadingModel, NetworkModel, TierConfig};
pub use simulate::{
    default_boundary_radius, empirical_ccdf, simulate_2d, simulate_equivalent_1d,
    SimulationConfig, SimulationEstimate, TrialRecord,
};
