#![allow(dead_code)]

//! Shared fixtures for the integration suites.

use hetnet::{FadingModel, NetworkModel, TierConfig};
use rand::Rng;

/// The default two-tier macro/pico scenario used throughout the suites:
/// densities 0.001 and 0.002, powers 53 dBm and 33 dBm, unit biases,
/// exponential unit-mean fading, exponents 3.8 and 3.5, common threshold.
pub fn paper_model(beta: f64) -> NetworkModel {
    NetworkModel {
        tiers: vec![
            TierConfig {
                density: 0.001,
                power: 10f64.powf(5.3),
                bias: 1.0,
                pathloss_exponent: 3.8,
                fading: FadingModel::Exponential { mean: 1.0 },
                sinr_threshold: beta,
            },
            TierConfig {
                density: 0.002,
                power: 10f64.powf(3.3),
                bias: 1.0,
                pathloss_exponent: 3.5,
                fading: FadingModel::Exponential { mean: 1.0 },
                sinr_threshold: beta,
            },
        ],
        noise: 0.0,
    }
}

/// Random valid model: 1..=5 tiers, exponents in [2.1, 6], moderate power
/// and density ranges, thresholds in [10^-0.5, 10].
pub fn random_model<R: Rng>(rng: &mut R) -> NetworkModel {
    let tiers = (0..rng.random_range(1..=5usize))
        .map(|_| {
            let fading = match rng.random_range(0..3) {
                0 => FadingModel::Exponential {
                    mean: 10f64.powf(rng.random_range(-1.0..1.0)),
                },
                1 => FadingModel::LogNormal {
                    sigma_db: rng.random_range(0.0..8.0),
                    mean_db: rng.random_range(-3.0..3.0),
                },
                _ => FadingModel::Constant {
                    value: 10f64.powf(rng.random_range(-1.0..1.0)),
                },
            };
            TierConfig {
                density: 10f64.powf(rng.random_range(-4.0..-1.0)),
                power: 10f64.powf(rng.random_range(0.0..6.0)),
                bias: 10f64.powf(rng.random_range(-1.0..1.0)),
                pathloss_exponent: rng.random_range(2.1..6.0),
                fading,
                sinr_threshold: 10f64.powf(rng.random_range(-0.5..1.0)),
            }
        })
        .collect();
    NetworkModel { tiers, noise: 0.0 }
}

/// Exponential fading whose fractional moment at exponent `m` equals
/// `target` exactly as an f64: start from the analytic inverse and walk the
/// mean by ulps until the computed moment reproduces the target bit for
/// bit. A couple of steps always suffice because one ulp of the mean moves
/// the moment by less than one ulp.
pub fn exponential_matching_exact(m: f64, target: f64) -> FadingModel {
    let mut fading = FadingModel::exponential_with_moment(m, target).unwrap();
    for _ in 0..256 {
        let FadingModel::Exponential { mean } = fading else {
            unreachable!()
        };
        let got = fading.fractional_moment(m).unwrap();
        if got == target {
            return fading;
        }
        let next = if got < target {
            f64::from_bits(mean.to_bits() + 1)
        } else {
            f64::from_bits(mean.to_bits() - 1)
        };
        fading = FadingModel::Exponential { mean: next };
    }
    panic!("no exact moment preimage found for m={m}, target={target}");
}
