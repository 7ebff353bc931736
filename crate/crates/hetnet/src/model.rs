//! Network scenario description: per-tier parameters, fading distributions
//! and their fractional moments.
//!
//! Everything here works in linear units (mW for powers, plain ratios for
//! gains and SINR). Conversion from dB/dBm belongs to the caller; see
//! [`db_to_linear`] and [`linear_to_db`].

use rand::Rng;
use rand_distr::{Distribution, Exp, LogNormal};

use crate::error::{Error, Result, Violation};
use crate::special::gamma_fn;

const LN10_OVER_10: f64 = core::f64::consts::LN_10 / 10.0;

/// Convert a dB (or dBm) quantity to its linear value.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Random channel power gain of one tier.
///
/// Any distribution is admissible as long as the fractional moment
/// `E[Psi^m]` is finite for `m` in (0, 1); the three families below cover
/// the usual modelling choices (Rayleigh-power, shadowing, no fading).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// Exponentially distributed power gain with the given mean.
    Exponential { mean: f64 },
    /// Log-normal gain; `sigma_db`/`mean_db` parameterise the dB value
    /// `X ~ N(mean_db, sigma_db^2)` of the gain, so `ln Psi = X ln(10)/10`.
    LogNormal { sigma_db: f64, mean_db: f64 },
    /// Deterministic gain.
    Constant { value: f64 },
}

impl FadingModel {
    pub fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            FadingModel::Exponential { mean } => {
                if !(mean > 0.0) || !mean.is_finite() {
                    return Err(format!("exponential fading mean must be > 0, got {mean}"));
                }
            }
            FadingModel::LogNormal { sigma_db, mean_db } => {
                if !(sigma_db >= 0.0) || !sigma_db.is_finite() {
                    return Err(format!("log-normal sigma_db must be >= 0, got {sigma_db}"));
                }
                if !mean_db.is_finite() {
                    return Err(format!("log-normal mean_db must be finite, got {mean_db}"));
                }
            }
            FadingModel::Constant { value } => {
                if !(value > 0.0) || !value.is_finite() {
                    return Err(format!("constant fading value must be > 0, got {value}"));
                }
            }
        }
        Ok(())
    }

    /// Natural-log parameters (mu, sigma) of the log-normal gain.
    fn ln_params(sigma_db: f64, mean_db: f64) -> (f64, f64) {
        (mean_db * LN10_OVER_10, sigma_db * LN10_OVER_10)
    }

    /// Fractional moment `E[Psi^m]` for `m` in (0, 1).
    ///
    /// Exponential(mu): `mu^m * Gamma(1 + m)`; log-normal:
    /// `exp(m*mu_ln + m^2*sigma_ln^2/2)`; constant c: `c^m`.
    pub fn fractional_moment(&self, m: f64) -> Result<f64> {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::Domain {
                name: "fractional_moment",
                reason: format!("exponent must lie in (0, 1), got {m}"),
            });
        }
        self.validate().map_err(|reason| Error::Domain {
            name: "fractional_moment",
            reason,
        })?;
        Ok(match *self {
            FadingModel::Exponential { mean } => mean.powf(m) * gamma_fn(1.0 + m)?,
            FadingModel::LogNormal { sigma_db, mean_db } => {
                let (mu, sigma) = Self::ln_params(sigma_db, mean_db);
                (m * mu + 0.5 * m * m * sigma * sigma).exp()
            }
            FadingModel::Constant { value } => value.powf(m),
        })
    }

    /// Full first moment `E[Psi]` (used for interference-tail estimates).
    pub fn mean(&self) -> f64 {
        match *self {
            FadingModel::Exponential { mean } => mean,
            FadingModel::LogNormal { sigma_db, mean_db } => {
                let (mu, sigma) = Self::ln_params(sigma_db, mean_db);
                (mu + 0.5 * sigma * sigma).exp()
            }
            FadingModel::Constant { value } => value,
        }
    }

    /// Exponential fading whose fractional moment `E[Psi^m]` equals `target`.
    ///
    /// Solves `mu^m * Gamma(1+m) = target` for the mean; handy for building
    /// scenarios in which two different fading families are moment-matched
    /// by construction.
    pub fn exponential_with_moment(m: f64, target: f64) -> Result<FadingModel> {
        if !(m > 0.0 && m < 1.0) || !(target > 0.0) {
            return Err(Error::Domain {
                name: "exponential_with_moment",
                reason: format!("need m in (0,1) and target > 0, got m={m}, target={target}"),
            });
        }
        let mean = (target / gamma_fn(1.0 + m)?).powf(1.0 / m);
        Ok(FadingModel::Exponential { mean })
    }

    /// Draw one gain sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingModel::Exponential { mean } => {
                // Exp::new takes the rate.
                Exp::new(1.0 / mean).expect("validated").sample(rng)
            }
            FadingModel::LogNormal { sigma_db, mean_db } => {
                let (mu, sigma) = Self::ln_params(sigma_db, mean_db);
                LogNormal::new(mu, sigma).expect("validated").sample(rng)
            }
            FadingModel::Constant { value } => value,
        }
    }
}

/// Parameters of one tier: BS density, transmit power, association bias,
/// path-loss exponent, fading law and SINR threshold. All linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct TierConfig {
    /// BSs per unit area (lambda > 0).
    pub density: f64,
    /// Transmit power (P > 0).
    pub power: f64,
    /// Association bias factor (B > 0).
    pub bias: f64,
    /// Path-loss exponent (epsilon > 2, required for interference convergence).
    pub pathloss_exponent: f64,
    pub fading: FadingModel,
    /// Minimum SINR for successful communication (beta > 0).
    pub sinr_threshold: f64,
}

impl TierConfig {
    fn violations(&self, tier: usize, out: &mut Vec<Violation>) {
        let mut push = |message: String| {
            out.push(Violation {
                tier: Some(tier),
                message,
            })
        };
        if !(self.density > 0.0) || !self.density.is_finite() {
            push(format!("density must be > 0, got {}", self.density));
        }
        if !(self.power > 0.0) || !self.power.is_finite() {
            push(format!("power must be > 0, got {}", self.power));
        }
        if !(self.bias > 0.0) || !self.bias.is_finite() {
            push(format!("bias must be > 0, got {}", self.bias));
        }
        if !(self.pathloss_exponent > 2.0) || !self.pathloss_exponent.is_finite() {
            push(format!(
                "pathloss_exponent must exceed 2, got {}",
                self.pathloss_exponent
            ));
        }
        if !(self.sinr_threshold > 0.0) || !self.sinr_threshold.is_finite() {
            push(format!(
                "sinr_threshold must be > 0, got {}",
                self.sinr_threshold
            ));
        }
        if let Err(msg) = self.fading.validate() {
            push(msg);
        }
    }

    /// The exponent `2/epsilon` of this tier, the only fading functional the
    /// analysis depends on.
    pub fn moment_exponent(&self) -> f64 {
        2.0 / self.pathloss_exponent
    }

    /// `E[Psi^(2/epsilon)]` of this tier.
    pub fn fractional_moment(&self) -> Result<f64> {
        self.fading.fractional_moment(self.moment_exponent())
    }
}

/// The full K-tier downlink scenario: an ordered list of tiers plus the
/// background noise power at the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub tiers: Vec<TierConfig>,
    /// Background noise power (eta >= 0, linear).
    pub noise: f64,
}

impl NetworkModel {
    pub fn new(tiers: Vec<TierConfig>, noise: f64) -> Result<Self> {
        let model = NetworkModel { tiers, noise };
        model.validated()?;
        Ok(model)
    }

    /// Check every invariant; an empty list means the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.tiers.is_empty() {
            out.push(Violation {
                tier: None,
                message: "model needs at least one tier".to_string(),
            });
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            out.push(Violation {
                tier: None,
                message: format!("noise must be >= 0, got {}", self.noise),
            });
        }
        for (k, tier) in self.tiers.iter().enumerate() {
            tier.violations(k, &mut out);
        }
        out
    }

    /// Like [`validate`](Self::validate) but as a `Result` for internal use.
    pub fn validated(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub fn tier_count(&self) -> usize {
        self.tiers.len()
    }

    pub fn tier(&self, k: usize) -> Result<&TierConfig> {
        self.tiers.get(k).ok_or(Error::TierIndex {
            index: k,
            count: self.tiers.len(),
        })
    }

    /// True when all path-loss exponents coincide (up to 1e-12 relative).
    pub fn equal_exponents(&self) -> bool {
        let first = self.tiers[0].pathloss_exponent;
        self.tiers
            .iter()
            .all(|t| (t.pathloss_exponent - first).abs() <= 1e-12 * first)
    }
}
