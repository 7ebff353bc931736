//! Monte-Carlo estimation of the SINR distribution, by two independent
//! routes: a direct planar simulation of the K-tier network inside a finite
//! boundary, and a sampler of the equivalent 1-D process. Agreement between
//! the two is the executable form of the stochastic-equivalence mapping.
//!
//! Trials are embarrassingly parallel. Every trial derives its own RNG
//! stream from `(seed, trial index)`, so results are independent of how the
//! trial range is partitioned across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::analytic::{equivalent_density, EquivalentDensity};
use crate::error::{Error, Result};
use crate::model::NetworkModel;

use core::f64::consts::PI;

/// RNG identity recorded in simulation output.
pub const RNG_ALGORITHM: &str = "chacha8 keyed per trial by splitmix64(seed, trial)";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Number of trials T (>= 1).
    pub trials: u64,
    /// Boundary radius of the planar simulation; `None` picks a radius at
    /// which the expected interference from beyond the boundary is
    /// negligible (see [`default_boundary_radius`]).
    pub boundary_radius: Option<f64>,
    /// Reproducibility seed.
    pub seed: u64,
    /// Point budget per realization of the 1-D sampler (>= 2).
    pub max_points: usize,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimulationConfig {
            trials,
            boundary_radius: None,
            seed,
            max_points: 2000,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Domain {
                name: "SimulationConfig",
                reason: "trials must be >= 1".into(),
            });
        }
        if let Some(r) = self.boundary_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::Domain {
                    name: "SimulationConfig",
                    reason: format!("boundary_radius must be > 0, got {r}"),
                });
            }
        }
        if self.max_points < 2 {
            return Err(Error::Domain {
                name: "SimulationConfig",
                reason: "max_points must be >= 2".into(),
            });
        }
        Ok(())
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Linear SINR; `+inf` for a lone BS without noise, 0.0 for the
    /// (practically impossible) empty realization.
    pub sinr: f64,
    /// Serving tier, `None` when the realization contained no BS at all.
    pub tier: Option<usize>,
    /// Whether `sinr` exceeded the serving tier's threshold.
    pub covered: bool,
}

/// Aggregated Monte-Carlo output.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationEstimate {
    /// Fraction of covered trials.
    pub coverage: f64,
    /// Binomial standard error of `coverage`.
    pub coverage_stderr: f64,
    /// Association counts per tier.
    pub tier_counts: Vec<u64>,
    /// Empirical SINR tail probability on the default threshold grid.
    pub ccdf: Vec<(f64, f64)>,
    /// Raw per-trial records (the SINR sample underlying `ccdf`).
    pub records: Vec<TrialRecord>,
    /// RNG identity, for reproducibility claims.
    pub rng_algorithm: &'static str,
    /// 1-D sampler only: mean neglected interference beyond the last kept
    /// point, relative to the mean simulated interference.
    pub truncation_tail_ratio: Option<f64>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial.wrapping_add(1))))
}

/// Default threshold grid for the reported CCDF: -20 dB to 30 dB in 1 dB
/// steps.
pub fn default_ccdf_thresholds() -> Vec<f64> {
    (-20..=30).map(|db| 10f64.powf(db as f64 / 10.0)).collect()
}

/// Boundary radius at which the mean biased power received from beyond the
/// boundary falls under 1e-4 of the mean power received from beyond the
/// typical nearest-BS distance. Falls back to `40 / sqrt(min density)` if
/// the search fails to converge.
pub fn default_boundary_radius(model: &NetworkModel) -> f64 {
    let lam_tot: f64 = model.tiers.iter().map(|t| t.density).sum();
    let d0 = 0.5 / lam_tot.sqrt();
    let tail = |r: f64| -> f64 {
        model
            .tiers
            .iter()
            .map(|t| {
                t.density * 2.0 * PI * t.power * t.bias * t.fading.mean()
                    * r.powf(2.0 - t.pathloss_exponent)
                    / (t.pathloss_exponent - 2.0)
            })
            .sum()
    };
    let reference = tail(d0);
    let mut r = d0;
    for _ in 0..60 {
        if tail(r) <= 1e-4 * reference {
            return r;
        }
        r *= 2.0;
    }
    let lam_min = model
        .tiers
        .iter()
        .map(|t| t.density)
        .fold(f64::INFINITY, f64::min);
    40.0 / lam_min.sqrt()
}

/// SINR, serving tier and coverage from a list of biased received powers.
/// This is the whole trial once positions and gains are drawn: serve the
/// strongest BS, everything else is interference. Exposed so harnesses can
/// inject hand-placed BSs.
pub fn record_from_powers<I>(model: &NetworkModel, powers: I) -> TrialRecord
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut best = 0.0f64;
    let mut best_tier = None;
    let mut total = 0.0f64;
    let mut any = false;
    for (tier, p) in powers {
        any = true;
        total += p;
        if p > best {
            best = p;
            best_tier = Some(tier);
        }
    }
    if !any || best_tier.is_none() {
        return TrialRecord {
            sinr: 0.0,
            tier: None,
            covered: false,
        };
    }
    let tier = best_tier.unwrap();
    let denom = (total - best) + model.noise;
    let sinr = if denom > 0.0 { best / denom } else { f64::INFINITY };
    TrialRecord {
        sinr,
        tier: Some(tier),
        covered: sinr > model.tiers[tier].sinr_threshold,
    }
}

/// Planar simulation: per tier, a Poisson number of BSs uniform on the disk
/// of the boundary radius, i.i.d. fading per BS, biased received powers,
/// max-power association.
pub fn simulate_2d(model: &NetworkModel, cfg: &SimulationConfig) -> Result<SimulationEstimate> {
    model.validated()?;
    cfg.validate()?;
    let rb = cfg
        .boundary_radius
        .unwrap_or_else(|| default_boundary_radius(model));
    let area = PI * rb * rb;
    let counts: Vec<Poisson<f64>> = model
        .tiers
        .iter()
        .map(|t| {
            Poisson::new(t.density * area).map_err(|e| Error::Domain {
                name: "simulate_2d",
                reason: format!("invalid Poisson mean: {e}"),
            })
        })
        .collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let mut best = 0.0f64;
            let mut best_tier = None;
            let mut total = 0.0f64;
            for (k, tier) in model.tiers.iter().enumerate() {
                let n = counts[k].sample(&mut rng) as u64;
                let half_eps = -0.5 * tier.pathloss_exponent;
                let pb = tier.power * tier.bias;
                for _ in 0..n {
                    // d = rb * sqrt(u) uniform on the disk; the angle is
                    // irrelevant for a receiver at the origin.
                    let d2 = rb * rb * rng.random::<f64>();
                    let gain: f64 = tier.fading.sample(&mut rng);
                    let p = pb * gain * d2.powf(half_eps);
                    total += p;
                    if p > best {
                        best = p;
                        best_tier = Some(k);
                    }
                }
            }
            match best_tier {
                None => TrialRecord {
                    sinr: 0.0,
                    tier: None,
                    covered: false,
                },
                Some(k) => {
                    let denom = (total - best) + model.noise;
                    let sinr = if denom > 0.0 {
                        best / denom
                    } else {
                        f64::INFINITY
                    };
                    TrialRecord {
                        sinr,
                        tier: Some(k),
                        covered: sinr > model.tiers[k].sinr_threshold,
                    }
                }
            }
        })
        .collect();
    Ok(aggregate(model, records, None))
}

/// One realization of the equivalent 1-D process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentTrial {
    pub serving_tier: Option<usize>,
    /// Distance of the nearest point (equivalent space).
    pub serving_distance: f64,
    /// `sum 1/r` over the retained points except the serving one.
    pub interference: f64,
    /// Mean interference neglected beyond the last retained point.
    pub tail_estimate: f64,
}

/// Sample one realization: per tier, unit-rate exponential spacings are
/// mapped through the inverse cumulative intensity `r = (S / a)^(1/m)`;
/// tiers are merged, sorted, and truncated to `max_points` points.
pub fn equivalent_trial<R: Rng + ?Sized>(
    eq: &EquivalentDensity,
    max_points: usize,
    rng: &mut R,
) -> EquivalentTrial {
    // Generate out to the radius holding max_points on average, with 15%
    // headroom so the truncation below almost always cuts at max_points.
    let target = 1.15 * max_points as f64;
    let r_stop = eq.inverse_cumulative(target);
    let mut points: Vec<(f64, u32)> = Vec::with_capacity((1.3 * max_points as f64) as usize);
    for (k, term) in eq.terms.iter().enumerate() {
        let measure = term.scale * r_stop.powf(term.exponent);
        let inv_exp = 1.0 / term.exponent;
        let mut s = 0.0f64;
        loop {
            let step: f64 = Exp1.sample(rng);
            s += step;
            if s > measure {
                break;
            }
            points.push(((s / term.scale).powf(inv_exp), k as u32));
        }
    }
    if points.is_empty() {
        return EquivalentTrial {
            serving_tier: None,
            serving_distance: f64::INFINITY,
            interference: 0.0,
            tail_estimate: eq.interference_tail(r_stop),
        };
    }
    points.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    points.truncate(max_points);
    let (r1, tier1) = points[0];
    let interference: f64 = points[1..].iter().map(|(r, _)| 1.0 / r).sum();
    EquivalentTrial {
        serving_tier: Some(tier1 as usize),
        serving_distance: r1,
        interference,
        tail_estimate: eq.interference_tail(points.last().unwrap().0),
    }
}

/// Monte-Carlo estimate through the equivalent 1-D process: the SINR of a
/// realization is `(1/R1) / (sum of the other 1/R + noise)`.
pub fn simulate_equivalent_1d(
    model: &NetworkModel,
    cfg: &SimulationConfig,
) -> Result<SimulationEstimate> {
    model.validated()?;
    cfg.validate()?;
    let eq = equivalent_density(model)?;
    let outcomes: Vec<(TrialRecord, f64, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let t = equivalent_trial(&eq, cfg.max_points, &mut rng);
            let record = match t.serving_tier {
                None => TrialRecord {
                    sinr: 0.0,
                    tier: None,
                    covered: false,
                },
                Some(k) => {
                    let denom = t.interference + model.noise;
                    let sinr = if denom > 0.0 {
                        (1.0 / t.serving_distance) / denom
                    } else {
                        f64::INFINITY
                    };
                    TrialRecord {
                        sinr,
                        tier: Some(k),
                        covered: sinr > model.tiers[k].sinr_threshold,
                    }
                }
            };
            (record, t.tail_estimate, t.interference)
        })
        .collect();
    let mut records = Vec::with_capacity(outcomes.len());
    let mut tail_sum = 0.0;
    let mut interference_sum = 0.0;
    for (r, tail, interference) in outcomes {
        records.push(r);
        tail_sum += tail;
        interference_sum += interference;
    }
    let ratio = if interference_sum > 0.0 {
        tail_sum / interference_sum
    } else {
        f64::INFINITY
    };
    Ok(aggregate(model, records, Some(ratio)))
}

/// Fraction of records whose SINR strictly exceeds each threshold.
pub fn empirical_ccdf(records: &[TrialRecord], thresholds: &[f64]) -> Result<Vec<(f64, f64)>> {
    if records.is_empty() {
        return Err(Error::Domain {
            name: "empirical_ccdf",
            reason: "record list is empty".into(),
        });
    }
    let n = records.len() as f64;
    Ok(thresholds
        .iter()
        .map(|&thr| {
            let count = records.iter().filter(|r| r.sinr > thr).count();
            (thr, count as f64 / n)
        })
        .collect())
}

/// Re-evaluate coverage from recorded trials under different per-tier
/// thresholds. Thresholds only enter the covered flag, so one simulation
/// serves a whole threshold sweep.
pub fn coverage_with_thresholds(records: &[TrialRecord], thresholds: &[f64]) -> (f64, f64) {
    let n = records.len() as f64;
    let covered = records
        .iter()
        .filter(|r| match r.tier {
            Some(k) => r.sinr > thresholds[k],
            None => false,
        })
        .count() as f64;
    let p = covered / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn aggregate(
    model: &NetworkModel,
    records: Vec<TrialRecord>,
    truncation_tail_ratio: Option<f64>,
) -> SimulationEstimate {
    let n = records.len() as f64;
    let mut tier_counts = vec![0u64; model.tiers.len()];
    let mut covered = 0u64;
    for r in &records {
        if let Some(k) = r.tier {
            tier_counts[k] += 1;
        }
        if r.covered {
            covered += 1;
        }
    }
    let coverage = covered as f64 / n;
    let ccdf = empirical_ccdf(&records, &default_ccdf_thresholds()).expect("records non-empty");
    SimulationEstimate {
        coverage,
        coverage_stderr: (coverage * (1.0 - coverage) / n).sqrt(),
        tier_counts,
        ccdf,
        records,
        rng_algorithm: RNG_ALGORITHM,
        truncation_tail_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FadingModel, TierConfig};

    fn tier(density: f64, power: f64, eps: f64, beta: f64) -> TierConfig {
        TierConfig {
            density,
            power,
            bias: 1.0,
            pathloss_exponent: eps,
            fading: FadingModel::Exponential { mean: 1.0 },
            sinr_threshold: beta,
        }
    }

    fn model_k1() -> NetworkModel {
        NetworkModel {
            tiers: vec![tier(0.001, 1.0, 4.0, 1.0)],
            noise: 0.0,
        }
    }

    #[test]
    fn lone_bs_is_always_covered() {
        let model = model_k1();
        let r = record_from_powers(&model, [(0usize, 3.5e-7)]);
        assert_eq!(r.sinr, f64::INFINITY);
        assert_eq!(r.tier, Some(0));
        assert!(r.covered);
    }

    #[test]
    fn equidistant_equal_pair_sits_at_zero_db() {
        let model = model_k1();
        let r = record_from_powers(&model, [(0usize, 2.0e-6), (0usize, 2.0e-6)]);
        assert_eq!(r.sinr, 1.0);
        assert!(!r.covered); // beta = 1 needs sinr strictly above 1

        let mut lenient = model_k1();
        lenient.tiers[0].sinr_threshold = 0.5;
        let r2 = record_from_powers(&lenient, [(0usize, 2.0e-6), (0usize, 2.0e-6)]);
        assert!(r2.covered);
    }

    #[test]
    fn empty_realization_is_not_covered() {
        let model = model_k1();
        let r = record_from_powers(&model, std::iter::empty());
        assert_eq!(r.sinr, 0.0);
        assert_eq!(r.tier, None);
        assert!(!r.covered);
    }

    #[test]
    fn ccdf_of_infinite_sinrs_is_one() {
        let records = vec![
            TrialRecord {
                sinr: f64::INFINITY,
                tier: Some(0),
                covered: true,
            };
            10
        ];
        let ccdf = empirical_ccdf(&records, &[0.1, 1.0, 1e6]).unwrap();
        assert!(ccdf.iter().all(|(_, p)| *p == 1.0));
    }

    #[test]
    fn ccdf_monotone_and_counts_uniform_values() {
        let records: Vec<TrialRecord> = (0..1000)
            .map(|i| TrialRecord {
                sinr: (i as f64 + 0.5) / 1000.0,
                tier: Some(0),
                covered: false,
            })
            .collect();
        let thresholds: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let ccdf = empirical_ccdf(&records, &thresholds).unwrap();
        for pair in ccdf.windows(2) {
            assert!(pair[1].1 <= pair[0].1);
        }
        let at_half = ccdf[5].1;
        assert!((at_half - 0.5).abs() < 1e-9, "{at_half}");
        assert!(empirical_ccdf(&[], &[1.0]).is_err());
    }

    #[test]
    fn reproducible_given_seed() {
        let model = model_k1();
        let cfg = SimulationConfig::new(500, 42);
        let a = simulate_2d(&model, &cfg).unwrap();
        let b = simulate_2d(&model, &cfg).unwrap();
        assert_eq!(a.coverage, b.coverage);
        assert_eq!(a.tier_counts, b.tier_counts);
        assert_eq!(a.records, b.records);
        let c = simulate_equivalent_1d(&model, &cfg).unwrap();
        let d = simulate_equivalent_1d(&model, &cfg).unwrap();
        assert_eq!(c.records, d.records);
        // different seed, different stream
        let e = simulate_2d(&model, &SimulationConfig::new(500, 43)).unwrap();
        assert_ne!(a.records, e.records);
    }

    #[test]
    fn tier_counts_sum_to_trials() {
        let model = NetworkModel {
            tiers: vec![tier(0.001, 10.0, 4.0, 1.0), tier(0.002, 1.0, 3.5, 1.0)],
            noise: 0.0,
        };
        let cfg = SimulationConfig::new(300, 7);
        let est = simulate_equivalent_1d(&model, &cfg).unwrap();
        assert_eq!(est.tier_counts.iter().sum::<u64>(), 300);
        assert_eq!(est.records.len(), 300);
    }

    #[test]
    fn nearest_point_tail_matches_lemma() {
        // Single tier with a = 1, m = 0.5: P(R1 > 1) = exp(-1).
        use crate::analytic::CumulativeTerm;
        let eq = EquivalentDensity {
            terms: vec![CumulativeTerm {
                scale: 1.0,
                exponent: 0.5,
            }],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let mut beyond = 0u64;
        for _ in 0..n {
            let t = equivalent_trial(&eq, 64, &mut rng);
            if t.serving_distance > 1.0 {
                beyond += 1;
            }
        }
        let p = beyond as f64 / n as f64;
        let want = (-1.0f64).exp();
        let se = (want * (1.0 - want) / n as f64).sqrt();
        assert!((p - want).abs() < 3.0 * se, "{p} vs {want}");
    }

    #[test]
    fn truncation_tail_is_reported_small() {
        let model = model_k1();
        let cfg = SimulationConfig::new(200, 3);
        let est = simulate_equivalent_1d(&model, &cfg).unwrap();
        let ratio = est.truncation_tail_ratio.unwrap();
        // 2000 points with m = 0.5 leave a few 1e-4 of the interference out
        assert!(ratio < 1e-3, "tail ratio {ratio}");
    }

    #[test]
    fn coverage_rethresholding_matches_direct_run() {
        let mut model = NetworkModel {
            tiers: vec![tier(0.001, 10.0, 4.0, 1.0), tier(0.002, 1.0, 3.5, 1.0)],
            noise: 0.0,
        };
        let cfg = SimulationConfig::new(2000, 9);
        let est = simulate_equivalent_1d(&model, &cfg).unwrap();
        let beta = 10f64.powf(0.5);
        model.tiers[0].sinr_threshold = beta;
        model.tiers[1].sinr_threshold = beta;
        let direct = simulate_equivalent_1d(&model, &cfg).unwrap();
        let (re_cov, _) = coverage_with_thresholds(&est.records, &[beta, beta]);
        assert_eq!(re_cov, direct.coverage);
    }

    #[test]
    fn zero_config_rejected() {
        let model = model_k1();
        assert!(simulate_2d(&model, &SimulationConfig::new(0, 1)).is_err());
        let mut cfg = SimulationConfig::new(10, 1);
        cfg.max_points = 1;
        assert!(simulate_equivalent_1d(&model, &cfg).is_err());
        cfg = SimulationConfig::new(10, 1);
        cfg.boundary_radius = Some(-3.0);
        assert!(simulate_2d(&model, &cfg).is_err());
    }
}
